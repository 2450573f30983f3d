//! Mid- and high-level list decoding on top of [`PathManager`].

use crate::encoder::{polar_inverse, OuterCode};
use crate::error::{Error, Result};
use crate::likelihood::{combine_even, combine_odd, Likelihood};
use crate::list::fork::ForkTable;
use crate::list::paths::PathManager;
use crate::types::{BitVec, CodeSpec, ProbPair};

#[derive(Debug, Clone, PartialEq)]
pub struct PathSummary<T = f64> {
    pub path: usize,
    /// `P_m[0][C_m[0][1]]`, proportional to `W(y | c)` of the path's codeword.
    pub metric: T,
    /// Outer-check verdict, when a check was supplied.
    pub check_passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T = f64> {
    pub path: usize,
    /// A check was supplied but no surviving path satisfied it.
    pub check_fallback: bool,
    pub paths: Vec<PathSummary<T>>,
}

impl<T: Likelihood> PathManager<T> {
    /// Writes the channel likelihoods into the layer-0 array of `ell`.
    pub fn load_channel(&mut self, ell: usize, probs: &[ProbPair<T>]) -> Result<()> {
        let n = 1usize << self.m;
        if probs.len() != n {
            return Err(Error::arg(format!("expected {n} likelihood pairs, got {}", probs.len())));
        }
        let p0 = self.get_array_p(0, ell)?;
        for (beta, pair) in probs.iter().enumerate() {
            p0.set(beta, pair.clone());
        }
        Ok(())
    }

    /// Fills layer `lambda` of every active path for phase `phi`, recursing
    /// first on even phases, then rescales the layer by its maximum entry
    /// across all active paths (rounded down to a power of two for `f64`).
    pub fn recursively_calc_p(&mut self, lambda: u32, phi: usize) -> Result<()> {
        if lambda == 0 {
            return Ok(());
        }
        let psi = phi / 2;
        if phi % 2 == 0 {
            self.recursively_calc_p(lambda - 1, psi)?;
        }
        let l = lambda as usize;
        let mut sigma = T::zero();
        for ell in 0..self.list_size {
            if !self.is_active(ell) {
                continue;
            }
            let here_slot = self.private_p_slot(l, ell);
            let below_slot = self.read_slot(l - 1, ell);
            // C_lambda shares the (now private) slot of P_lambda.
            let (lower, upper) = self.p_bank.split_at_mut(l);
            let below = &lower[l - 1][below_slot];
            let here = &mut upper[0][here_slot];
            let bits = &self.c_bank[l][here_slot];
            for beta in 0..here.len() {
                let a = below.get(2 * beta);
                let b = below.get(2 * beta + 1);
                let value = if phi % 2 == 0 {
                    combine_even(a, b)
                } else {
                    combine_odd(a, b, bits.get(beta, 0))
                };
                for v in [&value.p0, &value.p1] {
                    if *v > sigma {
                        sigma = v.clone();
                    }
                }
                here.set(beta, value);
            }
        }
        if !self.normalize {
            return Ok(());
        }
        if sigma.is_zero() {
            return Err(Error::Numeric(format!(
                "every path has zero likelihood at layer {lambda}, phase {phi}"
            )));
        }
        let scale = T::scale_for(&sigma);
        for ell in 0..self.list_size {
            if !self.is_active(ell) {
                continue;
            }
            let s = self.private_p_slot(l, ell);
            let here = &mut self.p_bank[l][s];
            for beta in 0..here.len() {
                let cell = here.get_mut(beta);
                cell.p0 = cell.p0.div(&scale);
                cell.p1 = cell.p1.div(&scale);
            }
        }
        Ok(())
    }

    /// Propagates the bit pair decided at odd phase `phi` down from `lambda`.
    pub fn recursively_update_c(&mut self, lambda: u32, phi: usize) -> Result<()> {
        if phi % 2 == 0 {
            return Err(Error::arg(format!("bit update requires an odd phase, got {phi}")));
        }
        if lambda == 0 || lambda > self.m {
            return Err(Error::arg(format!("bit update at invalid layer {lambda}")));
        }
        let psi = phi / 2;
        let l = lambda as usize;
        for ell in 0..self.list_size {
            if !self.is_active(ell) {
                continue;
            }
            let here_slot = self.read_slot(l, ell);
            let below_slot = self.private_c_slot(l - 1, ell);
            let (lower, upper) = self.c_bank.split_at_mut(l);
            let below = &mut lower[l - 1][below_slot];
            let here = &upper[0][here_slot];
            for beta in 0..here.len() {
                let even = here.get(beta, 0);
                let odd = here.get(beta, 1);
                below.set(2 * beta, psi % 2, even ^ odd);
                below.set(2 * beta + 1, psi % 2, odd);
            }
        }
        if psi % 2 == 1 {
            self.recursively_update_c(lambda - 1, psi)?;
        }
        Ok(())
    }

    pub fn continue_paths_frozen(&mut self, phi: usize, frozen_value: u8) {
        let m = self.m as usize;
        for ell in 0..self.list_size {
            if !self.is_active(ell) {
                continue;
            }
            let s = self.private_c_slot(m, ell);
            self.c_bank[m][s].set(0, phi % 2, frozen_value);
        }
    }

    /// Splits every active path on bit `phi` and keeps the best forks.
    /// Paths with no surviving fork are killed before any clone is made, so
    /// the list never exceeds `L`.
    pub fn continue_paths_unfrozen(&mut self, phi: usize) -> Result<ForkTable<T>> {
        let m = self.m as usize;
        let mut prob_forks = Vec::with_capacity(self.list_size);
        for ell in 0..self.list_size {
            if self.is_active(ell) {
                let s = self.read_slot(m, ell);
                let pair = self.p_bank[m][s].get(0);
                prob_forks.push([Some(pair.p0.clone()), Some(pair.p1.clone())]);
            } else {
                prob_forks.push([None, None]);
            }
        }
        let table = ForkTable::select(prob_forks);
        let cont = &table.cont_forks;

        for ell in 0..self.list_size {
            if self.is_active(ell) && !cont[ell][0] && !cont[ell][1] {
                self.kill_path(ell)?;
            }
        }
        for ell in 0..self.list_size {
            match cont[ell] {
                [false, false] => continue,
                [true, true] => {
                    let s = self.private_c_slot(m, ell);
                    self.c_bank[m][s].set(0, phi % 2, 0);
                    let twin = self.clone_path(ell)?;
                    let s = self.private_c_slot(m, twin);
                    self.c_bank[m][s].set(0, phi % 2, 1);
                }
                [zero, _] => {
                    let s = self.private_c_slot(m, ell);
                    self.c_bank[m][s].set(0, phi % 2, u8::from(!zero));
                }
            }
        }
        Ok(table)
    }

    /// `P_m[0][C_m[0][1]]` of path `ell` once all phases are decided.
    pub fn path_metric(&mut self, ell: usize) -> Result<T> {
        if !self.is_active(ell) {
            return Err(Error::state(format!("path {ell} is not active")));
        }
        let m = self.m as usize;
        let sc = self.read_slot(m, ell);
        let last = self.c_bank[m][sc].get(0, 1);
        let sp = self.read_slot(m, ell);
        Ok(self.p_bank[m][sp].get(0).get(last).clone())
    }

    /// Layer-0 bits of path `ell`: its codeword.
    pub fn codeword(&mut self, ell: usize) -> Result<BitVec> {
        if !self.is_active(ell) {
            return Err(Error::state(format!("path {ell} is not active")));
        }
        let s = self.read_slot(0, ell);
        let c0 = &self.c_bank[0][s];
        BitVec::from_bits((0..c0.len()).map(|beta| c0.get(beta, 0)).collect())
    }

    /// Most likely active path. With an outer check, paths failing it are
    /// discarded unless every path fails. Ties go to the lowest index.
    pub fn find_most_probable_path(
        &mut self,
        spec: &CodeSpec,
        check: Option<&OuterCode>,
    ) -> Result<Selection<T>> {
        let mut paths = Vec::new();
        for ell in self.active_paths() {
            let metric = self.path_metric(ell)?;
            let check_passed = match check {
                Some(code) => {
                    let u = polar_inverse(self.codeword(ell)?.as_slice())?;
                    Some(code.verify(
                        spec.extract_info(u.as_slice()).as_slice(),
                        spec.extract_check(u.as_slice()).as_slice(),
                    ))
                }
                None => None,
            };
            paths.push(PathSummary {
                path: ell,
                metric,
                check_passed,
            });
        }
        if paths.is_empty() {
            return Err(Error::state("no active path to select"));
        }
        let any_passed = paths.iter().any(|p| p.check_passed == Some(true));
        let check_fallback = check.is_some() && !any_passed;
        let eligible = |p: &PathSummary<T>| !any_passed || p.check_passed == Some(true);

        let mut best: Option<usize> = None;
        let mut best_metric = T::zero();
        for p in paths.iter().filter(|p| eligible(p)) {
            if best_metric < p.metric {
                best = Some(p.path);
                best_metric = p.metric.clone();
            }
        }
        let path = best.unwrap_or_else(|| {
            paths
                .iter()
                .find(|p| eligible(p))
                .expect("at least one eligible path")
                .path
        });
        Ok(Selection {
            path,
            check_fallback,
            paths,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListMetadata<T = f64> {
    pub final_active: usize,
    pub selected_path: usize,
    pub paths: Vec<PathSummary<T>>,
    pub check_fallback: bool,
    pub copied_elements: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListOutcome<T = f64> {
    pub c_hat: BitVec,
    pub u_hat: BitVec,
    /// Payload bits of `u_hat` with the outer check stripped.
    pub info_hat: BitVec,
    pub metadata: ListMetadata<T>,
}

/// List decoder configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListDecoder {
    pub list_size: usize,
    pub normalize: bool,
    pub copy_on_write_only: bool,
}

impl ListDecoder {
    pub fn new(list_size: usize) -> Self {
        ListDecoder {
            list_size,
            normalize: true,
            copy_on_write_only: false,
        }
    }

    pub fn normalize(mut self, on: bool) -> Self {
        self.normalize = on;
        self
    }

    pub fn copy_on_write_only(mut self, on: bool) -> Self {
        self.copy_on_write_only = on;
        self
    }

    pub fn decode<T: Likelihood>(
        &self,
        spec: &CodeSpec,
        probs: &[ProbPair<T>],
        check: Option<&OuterCode>,
    ) -> Result<ListOutcome<T>> {
        if probs.len() != spec.n() {
            return Err(Error::arg(format!(
                "expected {} likelihood pairs, got {}",
                spec.n(),
                probs.len()
            )));
        }
        if probs.iter().any(|p| p.p0.is_negative() || p.p1.is_negative()) {
            return Err(Error::arg("likelihoods must be nonnegative"));
        }
        if let Some(code) = check {
            if code.width() != spec.crc_width() {
                return Err(Error::arg(format!(
                    "check width {} does not match the code's crc width {}",
                    code.width(),
                    spec.crc_width()
                )));
            }
        }
        let m = spec.m();
        let mut mgr = PathManager::new(self.list_size, m)?
            .with_normalization(self.normalize)
            .with_copy_on_write_only(self.copy_on_write_only);
        let first = mgr.assign_initial_path()?;
        mgr.load_channel(first, probs)?;
        for phi in 0..spec.n() {
            mgr.recursively_calc_p(m, phi)?;
            match spec.frozen_value(phi) {
                Some(v) => mgr.continue_paths_frozen(phi, v),
                None => {
                    mgr.continue_paths_unfrozen(phi)?;
                }
            }
            if phi % 2 == 1 {
                mgr.recursively_update_c(m, phi)?;
            }
        }
        let selection = mgr.find_most_probable_path(spec, check)?;
        let c_hat = mgr.codeword(selection.path)?;
        let u_hat = polar_inverse(c_hat.as_slice())?;
        let info_hat = spec.extract_info(u_hat.as_slice());
        Ok(ListOutcome {
            c_hat,
            u_hat,
            info_hat,
            metadata: ListMetadata {
                final_active: mgr.active_count(),
                selected_path: selection.path,
                paths: selection.paths,
                check_fallback: selection.check_fallback,
                copied_elements: mgr.copied_elements(),
            },
        })
    }
}

/// List decoding with the default (copy-on-access, normalized) configuration.
pub fn scl_decode<T: Likelihood>(
    spec: &CodeSpec,
    probs: &[ProbPair<T>],
    list_size: usize,
    check: Option<&OuterCode>,
) -> Result<ListOutcome<T>> {
    ListDecoder::new(list_size).decode(spec, probs, check)
}
