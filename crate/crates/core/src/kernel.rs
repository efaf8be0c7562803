//! Finite Markov kernels with a reference measure, stored sparsely by row.

use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

/// Row-stochastic kernel together with the measure it is reversible for.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    rows: Vec<Vec<(usize, f64)>>,
    measure: Vec<f64>,
    balance_defect: f64,
}

impl KernelMatrix {
    /// Builds the kernel, checking row sums and recording the worst relative
    /// detailed-balance defect m_i q_ij vs m_j q_ji.
    pub fn new(rows: Vec<Vec<(usize, f64)>>, measure: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if measure.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: measure.len() });
        }
        for (i, row) in rows.iter().enumerate() {
            let s: f64 = row.iter().map(|&(_, q)| q).sum();
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::BadConfig(format!("row {i} sums to {s}, not 1")));
            }
        }
        let mut kernel = Self { rows, measure, balance_defect: 0.0 };
        kernel.balance_defect = kernel.compute_balance_defect();
        Ok(kernel)
    }

    fn compute_balance_defect(&self) -> f64 {
        let mut scale = 0.0f64;
        let mut worst = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, q) in row {
                let fij = self.measure[i] * q;
                let fji = self.entry(j, i) * self.measure[j];
                scale = scale.max(fij);
                worst = worst.max((fij - fji).abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(c, _)| c == j)
            .map(|&(_, q)| q)
            .unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn balance_defect(&self) -> f64 {
        self.balance_defect
    }

    /// Aggregate asymmetry of the edge flux: sum |m_i q_ij - m_j q_ji|
    /// over the total flux. Less extreme-value sensitive than the max-entry
    /// defect, which suits Monte Carlo kernels.
    pub fn balance_defect_l1(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, q) in row {
                let fij = self.measure[i] * q;
                num += (fij - self.entry(j, i) * self.measure[j]).abs();
                den += fij;
            }
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    pub fn certify_reversible(&self, rel_tol: f64) -> Result<()> {
        if self.balance_defect > rel_tol {
            Err(Error::NotReversible { defect: self.balance_defect })
        } else {
            Ok(())
        }
    }

    /// Qf: function transform, (Qf)(i) = sum_j q_ij f(j).
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, q)| q * f[j]).sum())
            .collect()
    }

    /// mu Q: measure transform, (mu Q)(j) = sum_i mu_i q_ij.
    pub fn propagate(&self, mu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let w = mu[i];
            if w == 0.0 {
                continue;
            }
            for &(j, q) in row {
                out[j] += w * q;
            }
        }
        out
    }

    /// L2(m) inner product.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter()
            .zip(g)
            .zip(&self.measure)
            .map(|((&a, &b), &m)| a * b * m)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> KernelMatrix {
        // 3-vertex path: middle jumps to either end, ends jump to middle
        let rows = vec![
            vec![(1, 1.0)],
            vec![(0, 0.5), (2, 0.5)],
            vec![(1, 1.0)],
        ];
        let m = vec![0.5, 1.0, 0.5];
        KernelMatrix::new(rows, m).unwrap()
    }

    #[test]
    fn path_kernel_is_reversible() {
        let k = path3();
        assert!(k.balance_defect() < 1e-15);
        k.certify_reversible(1e-12).unwrap();
    }

    #[test]
    fn bad_row_sum_rejected() {
        let rows = vec![vec![(0, 0.7)]];
        assert!(KernelMatrix::new(rows, vec![1.0]).is_err());
    }

    #[test]
    fn propagate_middle_start() {
        let k = path3();
        let mu0 = vec![0.0, 1.0, 0.0];
        let mu1 = k.propagate(&mu0);
        assert_eq!(mu1, vec![0.5, 0.0, 0.5]);
        let mu2 = k.propagate(&mu1);
        assert_eq!(mu2, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn apply_constants_fixed() {
        let k = path3();
        let ones = vec![1.0; 3];
        assert_eq!(k.apply(&ones), ones);
    }
}
