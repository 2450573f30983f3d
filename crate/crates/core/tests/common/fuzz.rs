//! Random valid call sequences against `PathManager`, checked against a
//! shadow model in which every path owns plain copies of its arrays.

use std::collections::BTreeMap;

use polarlist::{PathManager, ProbPair};
use rand::Rng;

struct Shadow {
    p: Vec<Vec<Option<f64>>>,
    c: Vec<Vec<[Option<u8>; 2]>>,
}

/// Runs one random sequence of `steps` calls. Returns a description of the
/// first discrepancy, if any.
pub fn run_sequence<R: Rng>(rng: &mut R, steps: usize) -> Result<(), String> {
    let list_size = rng.random_range(1..=8);
    let m: u32 = rng.random_range(0..=4);
    let cow_only = rng.random_bool(0.5);
    let mut mgr = PathManager::<f64>::new(list_size, m)
        .map_err(|e| e.to_string())?
        .with_copy_on_write_only(cow_only);
    let first = mgr.assign_initial_path().map_err(|e| e.to_string())?;
    let fresh = || Shadow {
        p: (0..=m).map(|l| vec![None; 1 << (m - l)]).collect(),
        c: (0..=m).map(|l| vec![[None; 2]; 1 << (m - l)]).collect(),
    };
    let mut shadow: BTreeMap<usize, Shadow> = BTreeMap::new();
    shadow.insert(first, fresh());
    mgr.check_invariants()?;

    for step in 0..steps {
        let active: Vec<usize> = shadow.keys().copied().collect();
        let ell = active[rng.random_range(0..active.len())];
        let lambda = rng.random_range(0..=m);
        let len = 1usize << (m - lambda);
        let beta = rng.random_range(0..len);
        match rng.random_range(0..6) {
            0 if active.len() < list_size => {
                let new = mgr.clone_path(ell).map_err(|e| format!("step {step}: {e}"))?;
                if shadow.contains_key(&new) {
                    return Err(format!("step {step}: clone returned active index {new}"));
                }
                let copy = Shadow {
                    p: shadow[&ell].p.clone(),
                    c: shadow[&ell].c.clone(),
                };
                shadow.insert(new, copy);
            }
            1 if active.len() > 1 => {
                mgr.kill_path(ell).map_err(|e| format!("step {step}: {e}"))?;
                shadow.remove(&ell);
            }
            2 => {
                let v = rng.random::<f64>();
                mgr.get_array_p(lambda, ell)
                    .map_err(|e| e.to_string())?
                    .set(beta, ProbPair::new(v, 1.0 - v));
                shadow.get_mut(&ell).unwrap().p[lambda as usize][beta] = Some(v);
            }
            3 => {
                let parity = rng.random_range(0..2);
                let bit = rng.random_range(0..=1u8);
                mgr.get_array_c(lambda, ell)
                    .map_err(|e| e.to_string())?
                    .set(beta, parity, bit);
                shadow.get_mut(&ell).unwrap().c[lambda as usize][beta][parity] = Some(bit);
            }
            4 => {
                if let Some(v) = shadow[&ell].p[lambda as usize][beta] {
                    let got = mgr.get_array_p(lambda, ell).map_err(|e| e.to_string())?.get(beta).p0;
                    if got != v {
                        return Err(format!("step {step}: path {ell} layer {lambda} P[{beta}] = {got}, expected {v}"));
                    }
                }
            }
            _ => {
                let parity = rng.random_range(0..2);
                if let Some(bit) = shadow[&ell].c[lambda as usize][beta][parity] {
                    let got = mgr.get_array_c(lambda, ell).map_err(|e| e.to_string())?.get(beta, parity);
                    if got != bit {
                        return Err(format!("step {step}: path {ell} layer {lambda} C[{beta}][{parity}] = {got}, expected {bit}"));
                    }
                }
            }
        }
        mgr.check_invariants().map_err(|e| format!("step {step}: {e}"))?;
        let now: Vec<usize> = mgr.active_paths();
        if now != shadow.keys().copied().collect::<Vec<_>>() {
            return Err(format!("step {step}: active set {now:?} differs from model"));
        }
        if mgr.free_path_count() != list_size - now.len() {
            return Err(format!("step {step}: free path count mismatch"));
        }
    }
    Ok(())
}
