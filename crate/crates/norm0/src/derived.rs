//! Regression values computed by exhaustive enumeration, pinned here so
//! later runs can be checked for determinism.
//!
//! Nothing in this module is an externally stated fact: these are outputs
//! of [`crate::group::close_canonical`] on specific levels, frozen at the
//! time they were first computed. They cover the cases where the known
//! relation lists do not pin down the factor group (the 2-part at
//! `v₂(N) ∈ {7, 8}` and beyond) plus the full-quotient center at `N = 48`.
//! If one of these ever changes, enumeration has become nondeterministic
//! or a behavioral regression slipped in.

/// Full quotient order at `N = 48`.
pub const G48_ORDER: usize = 48;

/// Center of the full quotient at `N = 48`: element indices in canonical
/// enumeration order. The nontrivial central element is *not* an
/// Atkin-Lehner involution.
pub const G48_CENTER_INDICES: &[usize] = &[0, 47];

/// Witness words of the center elements at `N = 48`, in index order.
pub const G48_CENTER_WORDS: &[&str] = &["", "w16 w3 S4^2 w16 S4^2"];

/// Orders of `<w_{2^λ}, S_{2^μ}>` quotients at pure 2-power levels where
/// the stated relations are known to be incomplete.
pub const G128_ORDER: usize = 128;
pub const G256_ORDER: usize = 128;
pub const G512_ORDER: usize = 128;
pub const G1024_ORDER: usize = 128;

/// Mixed-level full-quotient orders kept as plain regressions.
pub const G144_ORDER: usize = 288;
pub const G576_ORDER: usize = 1152;
pub const G1800_ORDER: usize = 192;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close_canonical;
    use crate::Level;

    #[test]
    fn pinned_orders_are_reproduced() {
        for (n, expected) in [
            (48u64, G48_ORDER),
            (128, G128_ORDER),
            (256, G256_ORDER),
            (512, G512_ORDER),
            (144, G144_ORDER),
        ] {
            let g = close_canonical(&Level::new(n).unwrap()).unwrap();
            assert_eq!(g.order(), expected, "pinned order changed at N={n}");
        }
    }

    #[test]
    fn pinned_center_is_reproduced() {
        let g = close_canonical(&Level::new(48).unwrap()).unwrap();
        let center = g.center();
        assert_eq!(center, G48_CENTER_INDICES);
        let words: Vec<String> = center.iter().map(|&i| g.word(i).to_string()).collect();
        assert_eq!(words, G48_CENTER_WORDS);
        // the nontrivial central element is not any Atkin-Lehner involution
        for m in g.level().factorization().exact_divisors() {
            let w = crate::normalizer::atkin_lehner(g.level(), m).unwrap();
            let idx = g.find(&w).unwrap();
            if m != 1 {
                assert!(!center.contains(&idx), "w{m} unexpectedly central");
            }
        }
    }
}
