# title: The empty set as a defined constant
# kind: definitions
# theory: theory_empty.cs
# anchors: r1 (i)-(iv)
definition Empty = y <-> all x. (x in y <-> not x = x)
