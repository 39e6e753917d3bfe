# title: Formula (*) by the extensionality biconditional (E1)
# anchors: (E1), E1-route, (I), (II), (III), (*)
# mode: classical
layer fol

step E1a @(E1): axiom E1
expect E1a: all x. all y. ((all z. (z in x <-> z in y)) <-> x = y)
step E1b: spec [E1a] with x := x
step E1c: spec [E1b] with y := y
# instantiate the inner generality at z := x
step UIx: axiom UI with phi := (z in x <-> z in y); v := z; t := x
expect UIx: (all z. (z in x <-> z in y)) -> (x in x <-> x in y)
step I @(I): taut [E1c, UIx] |- x = y -> (x in x <-> x in y)
step IIa: contra [I]
step II @(II): eqv iffcomm [IIa]
step III @(III): eqv negshift [II]
expect III: (x in y <-> not x in x) -> not x = y
