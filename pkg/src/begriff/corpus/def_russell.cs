# title: A Russell set as a defined constant; existence fails
# kind: definitions
# theory: theory_empty.cs
# anchors: r1 (iv), RA
definition R = y <-> all x. (x in y <-> not x in x)
