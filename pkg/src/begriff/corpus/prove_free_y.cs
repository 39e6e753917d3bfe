# title: The Russell condition fails for any y; open and closed readings
# kind: formulas
# anchors: RA, (C), (E1)
# the open reading treats y as an arbitrary constant
goal open: not all x. (x in y <-> not x in x)
goal closed: all y. not all x. (x in y <-> not x in x)
