# title: Russell's contradiction in the Grundgesetze fragment
# anchors: (82), (77), i), ii), iii), (θ), (ι), (κ), (λ)
# mode: classical
layer frege

let R := ext e. not e mem e

subst i: f(%) := not % mem %
subst ii: F(%) := horiz %
subst iii: a := R

step theta @(θ): axiom P82 using i ii iii
expect theta: R mem R -> not R mem R

step iota @(ι): Ig [theta]
expect iota: not R mem R

step kappa @(κ): axiom P77 using i ii iii
expect kappa: not R mem R -> R mem R

step lambda @(λ): mp [kappa, iota]
expect lambda: R mem R
