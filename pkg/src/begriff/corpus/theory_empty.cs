# title: Comprehension and extensionality prove that exactly one set has no members
# anchors: (C), (E1), r1 (iv), RA
# mode: classical
layer fol

step e1 @(E1): axiom E1
step c0 @(C): axiom C with phi(x) := not x = x
expect c0: exists y. all x. (x in y <-> not x = x)

# if y' is also such a set, then by extensionality y' = y
step uniq @(E1): fol [e1] |- all y. all y'. ((all x. (x in y <-> not x = x)) -> ((all x. (x in y' <-> not x = x)) -> y' = y))
step eu @r1 (iv): fol [c0, uniq] |- exists y. ((all x. (x in y <-> not x = x)) & (all y'. ((all x. (x in y' <-> not x = x)) -> y' = y)))

# the Russell condition admits no set at all
step ra @RA: fol [] |- not exists y. all x. (x in y <-> not x in x)
