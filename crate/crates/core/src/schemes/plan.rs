//! Variable/equation counting for the general multi-phase scheme.

/// Counting plan for K users. The degrees of freedom are conjectural: the
/// scheme is only known to have enough variables, not to be solvable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiphasePlan {
    pub k: usize,
    /// Forward phases N.
    pub phases: usize,
    /// `(N^2 - 1) K` coding variables.
    pub n_v: usize,
    /// `K (K - 2)` alignment equations.
    pub n_e: usize,
    /// `K / (2N)`, valid only if the system turns out solvable.
    pub conjectured_dof: f64,
}

/// Smallest N with `(N^2 - 1) K >= K (K - 2)`, i.e. `N = ceil(sqrt(K - 1))`.
pub fn multiphase_plan(k: usize) -> MultiphasePlan {
    assert!(k >= 2, "need at least two users");
    let mut n = 1;
    while n * n < k - 1 {
        n += 1;
    }
    MultiphasePlan {
        k,
        phases: n,
        n_v: (n * n - 1) * k,
        n_e: k * (k - 2),
        conjectured_dof: k as f64 / (2 * n) as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_rows() {
        let p = multiphase_plan(9);
        assert_eq!((p.phases, p.n_v, p.n_e), (3, 72, 63));
        assert_eq!(p.conjectured_dof, 1.5);
        let p = multiphase_plan(3);
        assert_eq!((p.phases, p.n_v, p.n_e), (2, 9, 3));
        assert_eq!(p.conjectured_dof, 0.75);
        let p = multiphase_plan(2);
        assert_eq!((p.phases, p.n_e), (1, 0));
        assert_eq!(p.conjectured_dof, 1.0);
        assert_eq!(multiphase_plan(4).conjectured_dof, 1.0);
    }

    #[test]
    fn plan_is_minimal() {
        for k in 2..200 {
            let p = multiphase_plan(k);
            assert!(p.n_v >= p.n_e);
            let smaller = p.phases - 1;
            assert!(p.phases == 1 || (smaller * smaller).saturating_sub(1) * k < p.n_e);
        }
    }
}
