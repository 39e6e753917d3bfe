# title: Guarded instantiation blocks Russell's substitution; (10) and (12) still follow
# anchors: (IIIb), (IIIe), (2), (1), (3), iv), v), (4), (5), iii), (V), *), (6), (7), (8), (9), (10), (11), (12)
# mode: guarded
layer frege

let R := ext e. not e mem e
# the concept "is the extension of a concept under which it does not fall"
let W(%) := allF g. ((ext e2. horiz g(e2)) = % -> g(%))
let Vexp := ext e. not W(e)
define V := Vexp

# (2) from (IIIb) and (IIIe)
step 2a @(IIIb): axiom IIIb with g(%) := not (g(a) = g(%))
step 2b: eqv dneg [2a] at 1
step 2c @(IIIe): axiom IIIe with a := g(a)
step 2 @(2): mp [2b, 2c]
expect 2: not (g(a) = g(b)) -> not a = b

subst i: f(%) := not % mem %
subst ii: F(%) := horiz %
subst iii: a := R
subst iv: g(%) := a mem %
subst v: b := R

step 3 @(3): axiom L1 using i
expect 3: (not a mem a) = a mem R
step 4 @(4): inst [2] using iv v
expect 4: not ((a mem a) = a mem R) -> not a = R
step 5a: negid [3]
step 5 @(5): mp [4, 5a]
expect 5: not a = R
guard 5

# substitution iii) is now unavailable
step 3iii @iii): inst [3] using iii
expect 3iii blocked
step theta @(θ): axiom P82 using i ii iii
expect theta blocked

# (6)-(8): Basic Law V for the class V, then the abbreviation *)
step 6a @(V): axiom V with g(%) := not W(%); f(%) := horiz f(%)
step 6 @(6): inspec [6a] with x := V
step 7 @(7): corefer V [6]
expect 7: (Vexp = V) = ((not W(V)) = (horiz f(V)))
step 8 @(8): inst [7] with f(%) := W(%)
expect 8: (Vexp = V) = ((not W(V)) = W(V))

# (9): (2) with W for g and V for a and b
step 9 @(9): inst [2] with g(%) := W(%); a := V; b := V
expect 9: not (W(V) = W(V)) -> not V = V

# (10): unfold *) once, then identity elimination through Basic Law III
step 10a: unfold V [8] at 1
step 10b @(IIIe): axiom IIIe with a := Vexp
step 10c @(III): leib [10a, 10b]
step 10d: negid [10c]
step 10 @(10): mp [9, 10d]
expect 10: not V = V

# (11), (12): the same route with *) unfolded inside W
step 11 @(11): unfold V [7] at 2, 3
expect 11: (Vexp = V) = ((not W(Vexp)) = (horiz f(V)))
step 12a: inst [11] with f(%) := W(%)
step 12b: inst [2] with g(%) := W(%); a := Vexp; b := V
step 12c: unfold V [12a] at 1
step 12d @(IIIe): axiom IIIe with a := Vexp
step 12e @(III): leib [12c, 12d]
step 12f: negid [12e]
step 12g: mp [12b, 12f]
step 12 @(12): eqv eqsym [12g]
expect 12: not V = Vexp

# with (10) indexed, V itself can no longer be put for a free variable
guard 10
step selfV @(IIIe): axiom IIIe with a := V
expect selfV blocked
