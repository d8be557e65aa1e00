//! Scores for pairings: weight sums, accuracy against the optimal pairing,
//! and the normalized variant used when the exact solver is excluded.

use crate::error::{CoreError, Result};
use crate::model::Pairing;

/// Sum of shared-point counts over the matched pairs.
pub fn pairing_weight(p: &Pairing) -> u64 {
    p.weight_sum()
}

/// Ratio of a method's weight sum to the optimal (maximum-weight) sum.
///
/// Both pairings must come from the same contingency matrix; the optimal sum
/// then dominates, so the ratio lies in `[0, 1]`. An all-zero matrix gives
/// two zero sums, scored as 1.0.
pub fn accuracy(method_pairing: &Pairing, mwm_pairing: &Pairing) -> f64 {
    let method_w = method_pairing.weight_sum();
    let mwm_w = mwm_pairing.weight_sum();
    assert!(
        method_w <= mwm_w,
        "method weight {method_w} exceeds optimal weight {mwm_w}; \
         were the pairings built from the same matrix?"
    );
    if mwm_w == 0 {
        return 1.0;
    }
    method_w as f64 / mwm_w as f64
}

/// Each weight divided by the larger of the two; at least one component is
/// 1.0. Two zero weights score `(1.0, 1.0)`.
pub fn normalized_accuracy(smbp_w: u64, mmm_w: u64) -> (f64, f64) {
    let denom = smbp_w.max(mmm_w);
    if denom == 0 {
        return (1.0, 1.0);
    }
    (smbp_w as f64 / denom as f64, mmm_w as f64 / denom as f64)
}

/// Arithmetic mean and population standard deviation (divisor `n`).
pub fn summarize(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(CoreError::InvalidInput("cannot summarize an empty sample".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok((mean, libm::sqrt(variance)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Method;
    use alloc::vec;

    fn pairing(pairs: &[(u32, u32, u64)], method: Method) -> Pairing {
        Pairing::new(pairs.to_vec(), method).unwrap()
    }

    #[test]
    fn weight_sum_examples() {
        let p = pairing(&[(0, 0, 3), (1, 1, 5)], Method::Smbp);
        assert_eq!(pairing_weight(&p), 8);
        let empty = Pairing::new(vec![], Method::Smbp).unwrap();
        assert_eq!(pairing_weight(&empty), 0);
    }

    #[test]
    fn accuracy_examples() {
        let mwm = pairing(&[(0, 0, 3), (1, 1, 5)], Method::Mwm);
        assert_eq!(accuracy(&mwm, &mwm), 1.0);
        let method = pairing(&[(0, 0, 5), (1, 1, 1)], Method::Mmm);
        assert_eq!(accuracy(&method, &pairing(&[(0, 1, 4), (1, 0, 4)], Method::Mwm)), 0.75);
    }

    #[test]
    fn accuracy_of_zero_sums_is_one() {
        let zero = pairing(&[(0, 0, 0)], Method::Mwm);
        assert_eq!(accuracy(&zero, &zero), 1.0);
    }

    #[test]
    #[should_panic(expected = "exceeds optimal")]
    fn accuracy_asserts_dominance() {
        let method = pairing(&[(0, 0, 9)], Method::Mmm);
        let mwm = pairing(&[(0, 0, 3)], Method::Mwm);
        accuracy(&method, &mwm);
    }

    #[test]
    fn normalized_accuracy_examples() {
        assert_eq!(normalized_accuracy(100, 100), (1.0, 1.0));
        assert_eq!(normalized_accuracy(9995, 10000), (0.9995, 1.0));
        assert_eq!(normalized_accuracy(8, 6), (1.0, 0.75));
        assert_eq!(normalized_accuracy(0, 0), (1.0, 1.0));
    }

    #[test]
    fn summarize_examples() {
        assert_eq!(summarize(&[1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert_eq!(summarize(&[0.0, 1.0]).unwrap(), (0.5, 0.5));
        assert!(summarize(&[]).is_err());
    }
}
