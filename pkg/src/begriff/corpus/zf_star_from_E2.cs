# title: Formula (*) from substitutivity (E2), and (**) from the Russell condition
# anchors: RA, (C), (E2), (I), (II), (III), (*), (**)
# mode: classical
layer fol

# the comprehension instance behind the antinomy
step C0 @RA: axiom C with phi(x) := not x in x
expect C0: exists y. all x. (x in y <-> not x in x)

step E2a @(E2): axiom E2 with phi(x) := x in x; occ := 2
expect E2a: all x. all y. (x = y -> (x in x <-> x in y))
step E2b: spec [E2a] with x := x
step I @(I): spec [E2b] with y := y
expect I: x = y -> (x in x <-> x in y)
step IIa: contra [I]
step II @(II): eqv iffcomm [IIa]
expect II: not (x in y <-> x in x) -> not x = y
step III @(III): eqv negshift [II]
expect III: (x in y <-> not x in x) -> not x = y

# (**): a set of exactly the non-self-membered sets differs from every set
step Ra @(**): assume |- all x. (x in a <-> not x in x)
step IIIa: inst [III] with y := a
step starstar @(**): spec [Ra] with x := x
step nxa @(**): mp [IIIa, starstar]
expect nxa: not x = a
