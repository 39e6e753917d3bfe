# title: Extensionality with the plain Russell instance has no model
# kind: formulas
# anchors: (E1), (C)
axiom E1: all x. all y. ((all z. (z in x <-> z in y)) <-> x = y)
axiom russell: all x. (x in a <-> not x in x)
