# title: Extensionality with the guarded Russell condition has a model
# kind: formulas
# anchors: (E1), (**)
axiom E1: all x. all y. ((all z. (z in x <-> z in y)) <-> x = y)
axiom star2: all x. ((x in a <-> not x in x) -> not x = a)
