# title: Frege's way out, the (V'c) derivation for the class V
# anchors: (V'c), (V'b), *)
# mode: classical
layer frege

let W(%) := allF g. ((ext e2. horiz g(e2)) = % -> g(%))
let Vexp := ext e. not W(e)
define V := Vexp

step Vc @(V'c): axiom V'c with f(%) := horiz f(%); g(%) := not W(%); a := V
step Vc1 @*): fold V [Vc]
expect Vc1: ((ext e. horiz f(e)) = V) -> (not V = V -> (horiz f(V)) = (not W(V)))

# the first amendment, for comparison
step Vb @(V'b): axiom V'b with f(%) := not W(%); g(%) := horiz g(%); a := V
step Vb1 @*): fold V [Vb]
expect Vb1: (V = (ext al. horiz g(al))) -> (not V = V -> (not W(V)) = (horiz g(V)))
