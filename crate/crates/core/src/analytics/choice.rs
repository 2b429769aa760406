//! Choice-outcome probabilities of the uniform rule.
//!
//! Naming follows the three situations a node `v` can be in relative to the
//! neighbor `u` it was reached from: `c` when `v` is in `C_u`, `nc1` when it is
//! not and `c_v = 1`, `nc2` when it is not and `c_v = 2`. `random_*` refers to
//! a node picked at random. All degrees are in `G`.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiceProbabilities {
    pub alpha: f64,
}

impl ChoiceProbabilities {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    /// `P(|C_u| = 1)` for a random degree-`a` node.
    pub fn random_one(&self, a: usize) -> f64 {
        if a == 0 {
            return 0.0;
        }
        1.0 - self.alpha + self.alpha / a as f64
    }

    /// `P(|C_u| = 2)` for a random degree-`a` node.
    pub fn random_two(&self, a: usize) -> f64 {
        if a == 0 {
            return 0.0;
        }
        let a = a as f64;
        self.alpha * (a - 1.0) / a
    }

    /// `P(|C_v \ {u}| = k)` for a degree-`b` node `v` and a fixed neighbor `u`.
    pub fn chosen(&self, b: usize, k: usize) -> f64 {
        if b == 0 {
            return 0.0;
        }
        let (al, bf) = (self.alpha, b as f64);
        match k {
            0 => (1.0 - al + al / bf) / bf,
            1 => (bf - 1.0) / bf * (1.0 - al + 3.0 * al / bf),
            2 => al * (bf - 1.0) / bf * (bf - 2.0) / bf,
            _ => 0.0,
        }
    }

    /// `P(u in C_v)` given `c_v = 1`.
    pub fn not_chosen_single(&self, b: usize) -> f64 {
        if b == 0 {
            0.0
        } else {
            1.0 / b as f64
        }
    }

    /// Given `c_v = 2`: probability that `C_v \ {u}` has `k` members and `u in C_v`
    /// (`k = 0`: both picks were `u`; `k = 1`: exactly one was).
    pub fn not_chosen_double(&self, b: usize, k: usize) -> f64 {
        if b == 0 {
            return 0.0;
        }
        let bf = b as f64;
        match k {
            0 => 1.0 / (bf * bf),
            1 => (2.0 * bf - 2.0) / (bf * bf),
            _ => 0.0,
        }
    }

    /// Probability that a neighbor `v` outside `C_u` picks `u`, averaged over `c_v`.
    pub fn reverse_pick(&self, b: usize) -> f64 {
        (1.0 - self.alpha) * self.not_chosen_single(b)
            + self.alpha * (self.not_chosen_double(b, 0) + self.not_chosen_double(b, 1))
    }
}
