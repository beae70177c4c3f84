use crate::rational::{ceil_pow, to_f64, Rational};

use super::ReductionError;

pub fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|p| n % p == 0).expect("n ≥ 2 has a prime factor");
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

pub fn smallest_prime_power_at_least(n: usize) -> usize {
    (n.max(2)..).find(|&k| is_prime_power(k)).expect("prime powers are unbounded")
}

/// Every quantity of the reduction's parameter schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionParams {
    pub gamma: Rational,
    pub delta: Rational,
    /// `α = 2δ`.
    pub alpha: Rational,
    /// Smallest prime power `≥ 2/α`.
    pub d: usize,
    /// `γ' = (γ − δ)/(1 − δ)`.
    pub gamma_prime: Rational,
    pub n0: usize,
    pub n1: usize,
    /// `⌈n1^((1−γ')/γ')⌉` unless overridden.
    pub u: u64,
    pub u_overridden: bool,
    /// `⌈D (1 − α) ln u⌉`, at least 1.
    pub ell: usize,
    /// `α / (2 D² ℓ²)`.
    pub eps0: f64,
    /// `ε0² D²`.
    pub eps: f64,
    /// B-degree of the input game, when known.
    pub q: Option<usize>,
}

impl ReductionParams {
    /// Recomputes everything downstream of `u`.
    pub fn with_u(mut self, u: u64, overridden: bool) -> Self {
        self.u = u.max(1);
        self.u_overridden = overridden;
        let one = Rational::from_integer(1);
        let ell = (self.d as f64 * to_f64(&(one - self.alpha)) * (self.u as f64).ln()).ceil();
        self.ell = (ell as usize).max(1);
        let d2 = (self.d * self.d) as f64;
        let l2 = (self.ell * self.ell) as f64;
        self.eps0 = to_f64(&self.alpha) / (2.0 * d2 * l2);
        self.eps = self.eps0 * self.eps0 * d2;
        self
    }

    /// `N = n1 · u`.
    pub fn element_count(&self) -> f64 {
        self.n1 as f64 * self.u as f64
    }

    /// Gap `(1 − δ) ln u` between the completeness and soundness cover sizes
    /// per A-vertex.
    pub fn gap(&self) -> f64 {
        (1.0 - to_f64(&self.delta)) * (self.u as f64).ln()
    }

    /// `(1 − γ) ln N`, the gap the schedule is designed to reach.
    pub fn target_gap(&self) -> f64 {
        (1.0 - to_f64(&self.gamma)) * self.element_count().ln()
    }

    /// `|ln u − (1 − γ') ln(n1 u)|`, zero up to rounding when `u` follows
    /// the schedule.
    pub fn identity_error(&self) -> f64 {
        let lhs = (self.u as f64).ln();
        let rhs = (1.0 - to_f64(&self.gamma_prime)) * self.element_count().ln();
        (lhs - rhs).abs()
    }

    /// `(D^(log D) · log m)^(1/α)` with the hidden constant taken as 1.
    pub fn u_requirement(&self, m: usize) -> f64 {
        let d = self.d as f64;
        (d.powf(d.log2()) * (m.max(2) as f64).log2()).powf(1.0 / to_f64(&self.alpha))
    }

    /// `2/D < α`, the strict form the set-cover gadget asks for.
    pub fn alpha_strictly_above_2_over_d(&self) -> bool {
        Rational::new(2, self.d as i64) < self.alpha
    }

    /// `(1 − 2α) ln u`: per-A-vertex cover size below which soundness fails.
    pub fn soundness_threshold(&self, a_count: usize) -> f64 {
        a_count as f64 * (1.0 - 2.0 * to_f64(&self.alpha)) * (self.u as f64).ln()
    }
}

/// Derives the schedule from `γ`, `δ` and the size `n1` of the intermediate
/// game.
pub fn schedule_params(n0: usize, gamma: Rational, delta: Rational, n1: usize) -> Result<ReductionParams, ReductionError> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if !(zero < delta && delta < gamma && gamma < one) {
        return Err(ReductionError::BadParameters("need 0 < δ < γ < 1".into()));
    }
    if n1 < 2 {
        return Err(ReductionError::BadParameters("need n1 ≥ 2".into()));
    }
    let alpha = delta * Rational::from_integer(2);
    if alpha >= one {
        return Err(ReductionError::BadParameters("α = 2δ must stay below 1".into()));
    }
    let two_over_alpha = Rational::from_integer(2) / alpha;
    let d = smallest_prime_power_at_least(two_over_alpha.ceil().to_integer() as usize);
    let gamma_prime = (gamma - delta) / (one - delta);
    let exponent = (one - gamma_prime) / gamma_prime;
    let u = ceil_pow(n1 as u64, exponent);
    let base = ReductionParams {
        gamma,
        delta,
        alpha,
        d,
        gamma_prime,
        n0,
        n1,
        u,
        u_overridden: false,
        ell: 1,
        eps0: 0.0,
        eps: 0.0,
        q: None,
    };
    Ok(base.with_u(u, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        let pp: Vec<usize> = (0..20).filter(|&n| is_prime_power(n)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
        assert_eq!(smallest_prime_power_at_least(10), 11);
        assert_eq!(smallest_prime_power_at_least(1), 2);
    }

    #[test]
    fn worked_example() {
        let p = schedule_params(100, Rational::new(1, 2), Rational::new(1, 10), 100).unwrap();
        assert_eq!(p.alpha, Rational::new(1, 5));
        assert_eq!(p.d, 11);
        assert_eq!(p.gamma_prime, Rational::new(4, 9));
        // u = ⌈100^(5/4)⌉
        assert_eq!(p.u, 317);
        assert_eq!(p.ell, (11.0 * 0.8 * 317f64.ln()).ceil() as usize);
        assert_eq!(p.eps, p.eps0 * p.eps0 * 121.0);
        assert_eq!(p.eps0, 0.2 / (2.0 * 121.0 * (p.ell * p.ell) as f64));
    }

    #[test]
    fn identity_holds_on_schedule() {
        for n1 in [10usize, 100, 1000] {
            let p = schedule_params(n1, Rational::new(1, 2), Rational::new(1, 10), n1).unwrap();
            // ceiling on u perturbs the identity by at most ln(1 + 1/u)
            assert!(p.identity_error() < 1.0 / p.u as f64 + 1e-9, "{}", p.identity_error());
        }
    }

    #[test]
    fn small_delta_approaches_gamma() {
        let p = schedule_params(100, Rational::new(1, 2), Rational::new(1, 1000), 100).unwrap();
        assert_eq!(p.d, 1009);
        assert!((to_f64(&p.gamma_prime) - 0.5).abs() < 1e-3);
        assert!((p.gap() - p.target_gap()).abs() / p.target_gap() < 0.01);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(schedule_params(10, Rational::new(1, 2), Rational::new(1, 2), 10).is_err());
        assert!(schedule_params(10, Rational::new(1, 2), Rational::new(0, 1), 10).is_err());
        assert!(schedule_params(10, Rational::new(9, 10), Rational::new(3, 5), 10).is_err());
        assert!(schedule_params(10, Rational::new(1, 2), Rational::new(1, 10), 1).is_err());
    }

    #[test]
    fn desk_parameters() {
        let p = schedule_params(10, Rational::new(1, 2), Rational::new(1, 4), 4).unwrap();
        assert_eq!(p.d, 4);
        let p = schedule_params(10, Rational::new(1, 2), Rational::new(1, 5), 4).unwrap();
        assert_eq!(p.d, 5);
    }
}
