// Frozen output of bounds_reference.py (50-digit mpmath). Regenerate with that
// script; never edit the digits by hand.
#[allow(dead_code)]
const REFERENCE: &[(defcount::bounds::Bound, Option<u64>, u64, f64, f64)] = {
    use defcount::bounds::Bound::*;
    &[
        (UbTheorem5, None, 10, 0.001, 132.87712379549449391),
        (UbTheorem5, None, 50, 0.01, 614.38561897747246957),
        (UbCheng, None, 10, 0.001, 531.50849518197797566),
        (UbCheng, None, 50, 0.01, 2457.5424759098898783),
        (LbTheorem1, None, 10, 0.001, 55.438561897747246957),
        (LbTheorem1SmallDelta, Some(1_000_000), 10, 0.01, 166.09640474436811739),
        (LbTheorem2, Some(1_000_000), 10, 0.01, 33.150388680672005842),
        (LbAppendix, None, 10, 1e-6, 78.024748305580319818),
        (LbAppendix, None, 10, 1e-12, 245.31223626361751164),
        (LbAppendix, None, 10, 1e-15, 331.49842176400569887),
        (LbAppendix, None, 10, 1e-300, 8810.9259541121156937),
    ]
};

/// `lower_bound_expected(10, δ) / (10·log2(1/δ))` at δ = 1e-12, 1e-15, 1e-300.
#[allow(dead_code)]
const APPENDIX_RATIOS: [(f64, f64); 3] = [
    (1e-12, 0.61538617848965258372),
    (1e-15, 0.66527312310823496671),
    (1e-300, 0.88411766725400985422),
];
