//! Selection of the surviving forks at an unfrozen phase.

use std::cmp::Ordering;

use crate::likelihood::Likelihood;

/// Fork metrics of every path index (`None` for inactive paths) and the
/// continuation marks chosen from them.
#[derive(Debug, Clone, PartialEq)]
pub struct ForkTable<T = f64> {
    pub prob_forks: Vec<[Option<T>; 2]>,
    pub cont_forks: Vec<[bool; 2]>,
    pub rho: usize,
}

impl<T: Likelihood> ForkTable<T> {
    /// Marks the `rho = min(2 * active, L)` largest metrics. Ties go to the
    /// lower path index, then to bit 1, matching the SC hard decision.
    pub fn select(prob_forks: Vec<[Option<T>; 2]>) -> Self {
        let list_size = prob_forks.len();
        let active = prob_forks.iter().filter(|row| row[0].is_some()).count();
        let rho = (2 * active).min(list_size);
        let mut candidates: Vec<(usize, usize, &T)> = prob_forks
            .iter()
            .enumerate()
            .flat_map(|(ell, row)| {
                row.iter()
                    .enumerate()
                    .filter_map(move |(bit, v)| v.as_ref().map(|v| (ell, bit, v)))
            })
            .collect();
        candidates.sort_by(|a, b| {
            b.2.partial_cmp(a.2)
                .unwrap_or(Ordering::Equal)
                .then(a.0.cmp(&b.0))
                .then(b.1.cmp(&a.1))
        });
        let mut cont_forks = vec![[false; 2]; list_size];
        for &(ell, bit, _) in candidates.iter().take(rho) {
            cont_forks[ell][bit] = true;
        }
        ForkTable {
            prob_forks,
            cont_forks,
            rho,
        }
    }

    pub fn marked_count(&self) -> usize {
        self.cont_forks.iter().flatten().filter(|&&b| b).count()
    }
}
