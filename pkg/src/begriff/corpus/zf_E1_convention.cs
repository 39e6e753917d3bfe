# title: The tacit convention that different variables stand for different variables
# anchors: (E1)
# mode: classical
layer fol

step uvw @(E1): axiom E1 with x := u; y := v; z := w
expect uvw: all u. all v. ((all w. (w in u <-> w in v)) <-> u = v)

convention distinct
step selfd @(E1): axiom E1 with x := x; z := x
expect selfd rejected

convention free
step selff @(E1): axiom E1 with x := x; z := x
expect selff: all x. all y. ((all x. (x in x <-> x in y)) <-> x = y)
