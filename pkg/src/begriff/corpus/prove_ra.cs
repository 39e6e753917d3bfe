# title: Russell's antinomy as a first-order validity
# kind: formulas
# anchors: RA
goal ra: not exists y. all x. (x in y <-> not x in x)
goal refl: all x. x = x
