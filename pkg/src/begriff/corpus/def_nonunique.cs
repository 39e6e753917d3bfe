# title: A constant whose condition holds of everything; uniqueness fails
# kind: definitions
# theory: theory_empty.cs
# anchors: r1 (iv)
definition U = y <-> y = y
