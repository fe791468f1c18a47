//! The growing kernel-expansion structure: stored centers plus coefficients.
//!
//! Admission policies live here (novelty and coherence criteria, fixed-size
//! FIFO replacement); the set-membership innovation check lives in
//! [`crate::filters`].

use std::io::Write;

use crate::kernels::{self, KernelSpec};
use crate::{Error, Result};

/// Ordered centers and their expansion coefficients.
///
/// `len(coefficients) == len(centers)` at all times. With `max_size` set, the
/// structure acts as a ring: [`Dictionary::replace_oldest`] overwrites the
/// oldest insertion, so the dictionary always holds the most recent
/// `max_size` admitted centers.
#[derive(Debug, Clone)]
pub struct Dictionary {
    centers: Vec<Vec<f64>>,
    coeffs: Vec<f64>,
    max_size: Option<usize>,
    /// Slot of the oldest insertion once the dictionary is full.
    oldest: usize,
}

impl Dictionary {
    pub fn new(max_size: Option<usize>) -> Self {
        Dictionary {
            centers: Vec::new(),
            coeffs: Vec::new(),
            max_size,
            oldest: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn max_size(&self) -> Option<usize> {
        self.max_size
    }

    pub fn is_full(&self) -> bool {
        self.max_size.map_or(false, |m| self.centers.len() >= m)
    }

    /// Input dimension, if any center is stored.
    pub fn dim(&self) -> Option<usize> {
        self.centers.first().map(|c| c.len())
    }

    /// Centers in slot order. Slot order equals insertion order until the
    /// first replacement; the expansion itself is order-independent.
    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    fn check_dim(&self, center: &[f64]) -> Result<()> {
        if let Some(d) = self.dim() {
            if center.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: center.len(),
                });
            }
        }
        Ok(())
    }

    /// Store a new center with its coefficient.
    ///
    /// Fails when the dictionary is already at `max_size`; fixed-size callers
    /// use [`Dictionary::replace_oldest`] instead.
    pub fn append(&mut self, center: Vec<f64>, coeff: f64) -> Result<()> {
        self.check_dim(&center)?;
        if self.is_full() {
            return Err(Error::Precondition(
                "append on full fixed-size dictionary; use replace_oldest",
            ));
        }
        self.centers.push(center);
        self.coeffs.push(coeff);
        Ok(())
    }

    /// Overwrite the oldest insertion (center and coefficient) in place.
    ///
    /// Returns the slot that was overwritten. Only valid once the dictionary
    /// has reached `max_size`.
    pub fn replace_oldest(&mut self, center: Vec<f64>, coeff: f64) -> Result<usize> {
        self.check_dim(&center)?;
        if !self.is_full() {
            return Err(Error::Precondition(
                "replace_oldest requires a full fixed-size dictionary",
            ));
        }
        let slot = self.oldest;
        self.centers[slot] = center;
        self.coeffs[slot] = coeff;
        self.oldest = (self.oldest + 1) % self.centers.len();
        Ok(slot)
    }

    /// Slot holding the oldest insertion (the next replacement target).
    pub fn oldest_slot(&self) -> usize {
        self.oldest
    }

    /// Indices of the slots ordered oldest insertion first.
    pub fn insertion_order(&self) -> Vec<usize> {
        let m = self.centers.len();
        (0..m).map(|k| (self.oldest + k) % m).collect()
    }

    /// Coherence criterion: admit `x` iff `max_k |kappa(x, c_k)| <= mu0`.
    ///
    /// An empty dictionary admits everything.
    pub fn coherence_admit(&self, x: &[f64], spec: &KernelSpec, mu0: f64) -> Result<bool> {
        if !(0.0..1.0).contains(&mu0) {
            return Err(Error::InvalidParameter {
                name: "mu0",
                value: mu0,
                reason: "coherence threshold must lie in [0, 1)",
            });
        }
        let mut max_coh = 0.0f64;
        for c in &self.centers {
            if c.len() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: c.len(),
                    got: x.len(),
                });
            }
            max_coh = max_coh.max(kernels::evaluate_unchecked(spec, x, c).abs());
        }
        Ok(max_coh <= mu0)
    }

    /// Novelty criterion: admit `x` iff `min_k ||x - c_k|| > delta1` and
    /// `|e| > delta2`.
    ///
    /// An empty dictionary admits everything.
    pub fn novelty_admit(&self, x: &[f64], e: f64, delta1: f64, delta2: f64) -> Result<bool> {
        for (name, v) in [("delta1", delta1), ("delta2", delta2)] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "novelty thresholds must be positive",
                });
            }
        }
        if self.centers.is_empty() {
            return Ok(true);
        }
        let min_dist = self
            .centers
            .iter()
            .map(|c| {
                x.iter()
                    .zip(c)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        Ok(min_dist > delta1 && e.abs() > delta2)
    }

    /// CSV snapshot, one row per center: `index,coefficient,center components`,
    /// rows ordered oldest insertion first.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let dim = self.dim().unwrap_or(0);
        write!(w, "index,coefficient")?;
        for j in 0..dim {
            write!(w, ",c{j}")?;
        }
        writeln!(w)?;
        for (row, slot) in self.insertion_order().into_iter().enumerate() {
            write!(w, "{row},{}", self.coeffs[slot])?;
            for v in &self.centers[slot] {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gauss(bw: f64) -> KernelSpec {
        KernelSpec::gaussian(bw).unwrap()
    }

    #[test]
    fn append_from_empty() {
        let mut d = Dictionary::new(None);
        d.append(vec![1.0, 2.0], 0.5).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.coeffs(), &[0.5]);
    }

    #[test]
    fn append_preserves_prior_coefficients() {
        let mut d = Dictionary::new(None);
        for k in 0..3 {
            d.append(vec![k as f64], 0.1 * k as f64).unwrap();
        }
        d.append(vec![9.0], 9.0).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.coeffs(), &[0.0, 0.1, 0.2, 9.0]);
    }

    #[test]
    fn thousand_appends_preserve_order() {
        // Oracle: plain list semantics.
        let mut d = Dictionary::new(None);
        for k in 0..1000 {
            d.append(vec![k as f64], k as f64).unwrap();
        }
        assert_eq!(d.len(), 1000);
        for k in 0..1000 {
            assert_eq!(d.centers()[k][0], k as f64);
            assert_eq!(d.coeffs()[k], k as f64);
        }
    }

    #[test]
    fn dimension_mismatch_on_append() {
        let mut d = Dictionary::new(None);
        d.append(vec![1.0, 2.0], 0.0).unwrap();
        assert!(matches!(
            d.append(vec![1.0], 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn replace_oldest_requires_full() {
        let mut d = Dictionary::new(Some(4));
        d.append(vec![0.0], 0.0).unwrap();
        assert!(matches!(
            d.replace_oldest(vec![1.0], 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn replace_oldest_is_fifo() {
        let mut d = Dictionary::new(Some(16));
        for k in 0..16 {
            d.append(vec![k as f64], k as f64).unwrap();
        }
        d.replace_oldest(vec![16.0], 16.0).unwrap();
        assert_eq!(d.len(), 16);
        assert!(d.centers().iter().all(|c| c[0] != 0.0), "oldest still present");

        d.replace_oldest(vec![17.0], 17.0).unwrap();
        assert!(d.centers().iter().all(|c| c[0] != 1.0));
    }

    #[test]
    fn ring_holds_last_max_size_centers_in_order() {
        // Oracle: ring-buffer semantics over 16 slots and 32 replacements.
        let cap = 16usize;
        let mut d = Dictionary::new(Some(cap));
        for k in 0..cap {
            d.append(vec![k as f64], 0.0).unwrap();
        }
        for k in cap..(cap + 32) {
            d.replace_oldest(vec![k as f64], 0.0).unwrap();
        }
        let got: Vec<f64> = d
            .insertion_order()
            .into_iter()
            .map(|s| d.centers()[s][0])
            .collect();
        let want: Vec<f64> = (32..48).map(|k| k as f64).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn coherence_admission() {
        let spec = gauss(1.0);
        let d = Dictionary::new(None);
        assert!(d.coherence_admit(&[0.0], &spec, 0.5).unwrap());

        let mut d = Dictionary::new(None);
        d.append(vec![1.0], 0.0).unwrap();
        // x equals a stored center: coherence is exactly 1.
        assert!(!d.coherence_admit(&[1.0], &spec, 0.9).unwrap());
        // Far away: Gaussian value below the threshold.
        assert!(d.coherence_admit(&[40.0], &spec, 0.5).unwrap());

        assert!(d.coherence_admit(&[0.0], &spec, 1.0).is_err());
        assert!(d.coherence_admit(&[0.0], &spec, -0.1).is_err());
    }

    #[test]
    fn coherence_matches_max_scan_oracle() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let spec = gauss(0.6);
        let mut d = Dictionary::new(None);
        for _ in 0..8 {
            d.append((0..2).map(|_| rng.gen_range(-1.0..1.0)).collect(), 0.0)
                .unwrap();
        }
        for _ in 0..50 {
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let max_k = d
                .centers()
                .iter()
                .map(|c| kernels::evaluate(&spec, &x, c).unwrap().abs())
                .fold(0.0f64, f64::max);
            let mu0 = 0.5;
            assert_eq!(d.coherence_admit(&x, &spec, mu0).unwrap(), max_k <= mu0);
        }
    }

    #[test]
    fn novelty_admission() {
        let mut d = Dictionary::new(None);
        assert!(d.novelty_admit(&[0.0], 0.0, 0.1, 0.1).unwrap());

        d.append(vec![1.0], 0.0).unwrap();
        // Coincides with a stored center: rejected regardless of the error.
        assert!(!d.novelty_admit(&[1.0], 100.0, 0.1, 0.1).unwrap());
        // Distance 0.5 > 0.1 and |e| = 0.2 > 0.1: admitted.
        assert!(d.novelty_admit(&[1.5], 0.2, 0.1, 0.1).unwrap());
        // Error below threshold blocks admission.
        assert!(!d.novelty_admit(&[1.5], 0.05, 0.1, 0.1).unwrap());

        assert!(d.novelty_admit(&[0.0], 0.0, 0.0, 0.1).is_err());
        assert!(d.novelty_admit(&[0.0], 0.0, 0.1, -1.0).is_err());
    }

    #[test]
    fn csv_snapshot_schema() {
        let mut d = Dictionary::new(None);
        d.append(vec![1.0, 2.0], 0.25).unwrap();
        d.append(vec![3.0, 4.0], -0.5).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,coefficient,c0,c1");
        assert_eq!(lines[1], "0,0.25,1,2");
        assert_eq!(lines[2], "1,-0.5,3,4");
    }

    proptest! {
        /// Lengths stay paired under arbitrary append/replace sequences.
        #[test]
        fn centers_and_coeffs_stay_paired(ops in proptest::collection::vec(any::<bool>(), 1..64)) {
            let mut d = Dictionary::new(Some(5));
            for (k, op) in ops.into_iter().enumerate() {
                let v = vec![k as f64];
                if op && d.is_full() {
                    d.replace_oldest(v, k as f64).unwrap();
                } else if !d.is_full() {
                    d.append(v, k as f64).unwrap();
                }
                prop_assert_eq!(d.centers().len(), d.coeffs().len());
                prop_assert!(d.len() <= 5);
            }
        }

        /// Coherence admission is monotone in the threshold.
        #[test]
        fn coherence_monotone_in_threshold(
            x in -2.0f64..2.0,
            mu_lo in 0.0f64..0.9,
            bump in 0.0f64..0.09,
        ) {
            let spec = gauss(0.8);
            let mut d = Dictionary::new(None);
            for c in [-1.5, 0.0, 1.5] {
                d.append(vec![c], 0.0).unwrap();
            }
            let mu_hi = mu_lo + bump;
            let lo = d.coherence_admit(&[x], &spec, mu_lo).unwrap();
            let hi = d.coherence_admit(&[x], &spec, mu_hi).unwrap();
            prop_assert!(!lo || hi, "admitted at {mu_lo} but rejected at {mu_hi}");
        }
    }
}
