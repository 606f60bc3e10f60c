use crate::error::{Error, Result};
use crate::repcounts::RepCounts;
use crate::subset::BitSubset;

/// Number of tabulated missing-sum counts, `k = 0..TABULATED`.
pub const TABULATED: usize = 32;

/// Definite/likely summary of one prefix `β ⊆ [0, n)` with `0 ∈ β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetaAnalysis {
    pub n: u32,
    /// `|D|`, the sums below `n` missing from `β + β`.
    pub definite_count: u32,
    /// `m = min L`.
    pub first_likely: u32,
    /// `2^n μ = 2^(n - |β ∩ [0, m-n]|)`.
    pub mu_scaled: u128,
    /// `2^n η = 5·2^(n-|β|) + Σ_{ℓ∈L} 2^(n - |β ∩ [0, ℓ-n]|)`.
    pub eta_scaled: u128,
}

/// Analysis from raw masks: `beta` over `[0, n)` and `missing`, the sums in
/// `[0, 2n-1)` with no representation.
#[inline]
pub fn analyze_masks(n: u32, beta: u64, missing: u128) -> BetaAnalysis {
    let low = (1u128 << n) - 1;
    let definite_count = (missing & low).count_ones();
    // L as offsets ℓ - n, with 2n-1 always present
    let likely = ((missing >> n) & ((1u128 << (n - 1)) - 1)) as u64 | 1u64 << (n - 1);
    let upto = |t: u32| (beta & ((2u64 << t) - 1)).count_ones();
    let first = likely.trailing_zeros();
    let mu_scaled = 1u128 << (n - upto(first));
    let mut eta_scaled = 5u128 << (n - beta.count_ones());
    let mut rest = likely;
    while rest != 0 {
        let t = rest.trailing_zeros();
        rest &= rest - 1;
        eta_scaled += 1u128 << (n - upto(t));
    }
    BetaAnalysis {
        n,
        definite_count,
        first_likely: n + first,
        mu_scaled,
        eta_scaled,
    }
}

/// Analyses `β` given its representation counts.
pub fn analyze_beta(beta: &BitSubset, rc: &RepCounts) -> Result<BetaAnalysis> {
    let n = beta.window();
    if !beta.contains(0) {
        return Err(Error::invalid("prefix must contain 0"));
    }
    if rc.set() != beta {
        return Err(Error::invalid(
            "representation counts belong to a different set",
        ));
    }
    Ok(analyze_masks(n, beta.mask(), rc.missing_mask()))
}

/// Fixed-width totals for one run of prefixes; flushed into big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct WordTotals {
    pub lower: [u128; TABULATED],
    pub upper: [u128; TABULATED],
    pub overhang: [u128; TABULATED],
}

impl WordTotals {
    pub fn new() -> Self {
        WordTotals {
            lower: [0; TABULATED],
            upper: [0; TABULATED],
            overhang: [0; TABULATED],
        }
    }

    #[inline]
    pub fn add(&mut self, ba: &BetaAnalysis) {
        let d = ba.definite_count as usize;
        let full = 1u128 << ba.n;
        let (mu, eta) = (ba.mu_scaled, ba.eta_scaled);
        if d < TABULATED {
            self.lower[d] += full.saturating_sub(eta);
            self.upper[d] += full - mu;
            self.overhang[d] += eta.min(2 * eta.saturating_sub(mu));
        }
        if d + 1 < TABULATED {
            self.lower[d + 1] += (2 * mu).saturating_sub(eta);
            self.upper[d + 1] += full.min(eta);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analysis(n: u32, elems: &[u32]) -> BetaAnalysis {
        let b = BitSubset::from_elements(n, elems.iter().copied()).unwrap();
        analyze_beta(&b, &RepCounts::from_set(b)).unwrap()
    }

    #[test]
    fn hand_examples() {
        let a = analysis(4, &[0]);
        assert_eq!(
            (a.definite_count, a.first_likely, a.mu_scaled, a.eta_scaled),
            (3, 4, 8, 72)
        );
        let a = analysis(4, &[0, 1, 2, 3]);
        assert_eq!(
            (a.definite_count, a.first_likely, a.mu_scaled, a.eta_scaled),
            (0, 7, 1, 6)
        );
        let a = analysis(2, &[0, 1]);
        assert_eq!(
            (a.definite_count, a.first_likely, a.mu_scaled, a.eta_scaled),
            (0, 3, 1, 6)
        );
        let a = analysis(2, &[0]);
        assert_eq!((a.definite_count, a.mu_scaled, a.eta_scaled), (1, 2, 14));
    }

    #[test]
    fn requires_zero() {
        let b = BitSubset::from_elements(4, [1]).unwrap();
        assert!(analyze_beta(&b, &RepCounts::from_set(b)).is_err());
    }

    #[test]
    fn contribution_examples() {
        let mut t = WordTotals::new();
        t.add(&analysis(2, &[0]));
        assert_eq!(&t.upper[..3], &[0, 2, 4]);
        assert_eq!(&t.overhang[..2], &[0, 14]);
        assert!(t.lower.iter().all(|&x| x == 0));

        let mut t = WordTotals::new();
        t.add(&analysis(2, &[0, 1]));
        assert_eq!(&t.upper[..2], &[3, 4]);
        assert_eq!(t.overhang[0], 6);
        assert!(t.lower.iter().all(|&x| x == 0));
    }

    #[test]
    fn mu_at_most_half() {
        for mask in (1u64..1 << 10).step_by(2) {
            let a = analyze_masks(
                10,
                mask,
                !crate::subset::sumset_mask(mask) & ((1 << 19) - 1),
            );
            assert!(a.mu_scaled <= 1 << 9);
        }
    }
}
