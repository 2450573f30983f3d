//! Low-level path bookkeeping for list decoding.
//!
//! Every layer owns a bank of `L` probability-pair arrays and `L` bit-pair
//! arrays. Paths reference bank slots through `path_to_slot`; a slot may be
//! shared by several paths, with `ref_count` tracking how many. Access goes
//! through [`PathManager::get_array_p`] / [`PathManager::get_array_c`], which
//! hand out a private copy whenever the slot is shared, so cloning a path is
//! `O(m)` and copies happen only for the layers a path actually touches.

use crate::cells::{BitPairArray, Cells};
use crate::error::{Error, Result};
use crate::likelihood::Likelihood;
use crate::types::ProbPair;

/// Array-backed stack that refuses to grow past its capacity.
#[derive(Debug, Clone)]
pub(crate) struct BoundedStack {
    items: Vec<usize>,
    capacity: usize,
}

impl BoundedStack {
    fn new(capacity: usize) -> Self {
        BoundedStack {
            items: Vec::with_capacity(capacity),
            capacity,
        }
    }

    #[track_caller]
    fn push(&mut self, v: usize) {
        assert!(self.items.len() < self.capacity, "stack overflow past capacity {}", self.capacity);
        self.items.push(v);
    }

    fn pop(&mut self) -> Option<usize> {
        self.items.pop()
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn contains(&self, v: usize) -> bool {
        self.items.contains(&v)
    }
}

#[derive(Debug, Clone)]
pub struct PathManager<T = f64> {
    pub(crate) m: u32,
    pub(crate) list_size: usize,
    inactive_paths: BoundedStack,
    active: Vec<bool>,
    pub(crate) p_bank: Vec<Vec<Cells<ProbPair<T>>>>,
    pub(crate) c_bank: Vec<Vec<BitPairArray>>,
    path_to_slot: Vec<Vec<usize>>,
    inactive_slots: Vec<BoundedStack>,
    ref_count: Vec<Vec<usize>>,
    initial_assigned: bool,
    copied_elements: u64,
    pub(crate) normalize: bool,
    pub(crate) copy_on_write_only: bool,
}

impl<T: Likelihood> PathManager<T> {
    /// Allocates all banks for list size `list_size` and `n = 2^m`; every
    /// slot and every path index starts out inactive.
    pub fn new(list_size: usize, m: u32) -> Result<Self> {
        if list_size < 1 {
            return Err(Error::arg("list size must be at least 1"));
        }
        let layers = m as usize + 1;
        let mut inactive_slots = Vec::with_capacity(layers);
        for _ in 0..layers {
            let mut stack = BoundedStack::new(list_size);
            for s in 0..list_size {
                stack.push(s);
            }
            inactive_slots.push(stack);
        }
        let mut inactive_paths = BoundedStack::new(list_size);
        for ell in 0..list_size {
            inactive_paths.push(ell);
        }
        Ok(PathManager {
            m,
            list_size,
            inactive_paths,
            active: vec![false; list_size],
            p_bank: (0..=m)
                .map(|l| {
                    (0..list_size)
                        .map(|_| Cells::new(1usize << (m - l), ProbPair::zero()))
                        .collect()
                })
                .collect(),
            c_bank: (0..=m)
                .map(|l| (0..list_size).map(|_| BitPairArray::new(1usize << (m - l))).collect())
                .collect(),
            path_to_slot: vec![vec![0; list_size]; layers],
            inactive_slots,
            ref_count: vec![vec![0; list_size]; layers],
            initial_assigned: false,
            copied_elements: 0,
            normalize: true,
            copy_on_write_only: false,
        })
    }

    /// Disables the per-layer rescaling (exact-arithmetic checks only).
    pub fn with_normalization(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    /// Copy shared arrays only before writes instead of before every access.
    pub fn with_copy_on_write_only(mut self, cow_only: bool) -> Self {
        self.copy_on_write_only = cow_only;
        self
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn assign_initial_path(&mut self) -> Result<usize> {
        if self.initial_assigned {
            return Err(Error::state("initial path already assigned"));
        }
        self.initial_assigned = true;
        let ell = self.inactive_paths.pop().expect("fresh manager has a free path index");
        self.active[ell] = true;
        for lambda in 0..=self.m as usize {
            let s = self.inactive_slots[lambda]
                .pop()
                .expect("fresh manager has a free slot on every layer");
            self.path_to_slot[lambda][ell] = s;
            self.ref_count[lambda][s] = 1;
        }
        Ok(ell)
    }

    /// New path sharing every array of `ell`; nothing is copied.
    pub fn clone_path(&mut self, ell: usize) -> Result<usize> {
        self.require_active(ell)?;
        let new = self
            .inactive_paths
            .pop()
            .ok_or_else(|| Error::state(format!("list full: cannot clone path {ell}")))?;
        self.active[new] = true;
        for lambda in 0..=self.m as usize {
            let s = self.path_to_slot[lambda][ell];
            self.path_to_slot[lambda][new] = s;
            self.ref_count[lambda][s] += 1;
        }
        Ok(new)
    }

    pub fn kill_path(&mut self, ell: usize) -> Result<()> {
        self.require_active(ell)?;
        self.active[ell] = false;
        self.inactive_paths.push(ell);
        for lambda in 0..=self.m as usize {
            let s = self.path_to_slot[lambda][ell];
            self.ref_count[lambda][s] -= 1;
            if self.ref_count[lambda][s] == 0 {
                self.inactive_slots[lambda].push(s);
            }
        }
        Ok(())
    }

    /// Writable probability array of path `ell` at `lambda`.
    pub fn get_array_p(&mut self, lambda: u32, ell: usize) -> Result<&mut Cells<ProbPair<T>>> {
        self.require_active(ell)?;
        self.require_layer(lambda)?;
        let s = self.private_p_slot(lambda as usize, ell);
        Ok(&mut self.p_bank[lambda as usize][s])
    }

    /// Writable bit-pair array of path `ell` at `lambda`.
    pub fn get_array_c(&mut self, lambda: u32, ell: usize) -> Result<&mut BitPairArray> {
        self.require_active(ell)?;
        self.require_layer(lambda)?;
        let s = self.private_c_slot(lambda as usize, ell);
        Ok(&mut self.c_bank[lambda as usize][s])
    }

    /// Makes the layer-`lambda` slot of `ell` private and returns it.
    fn make_private(&mut self, lambda: usize, ell: usize) -> (usize, Option<usize>) {
        let s = self.path_to_slot[lambda][ell];
        if self.ref_count[lambda][s] == 1 {
            return (s, None);
        }
        let fresh = self.inactive_slots[lambda]
            .pop()
            .expect("a shared slot implies a free slot on the same layer");
        self.ref_count[lambda][s] -= 1;
        self.ref_count[lambda][fresh] = 1;
        self.path_to_slot[lambda][ell] = fresh;
        (fresh, Some(s))
    }

    // The P and C banks share slot numbering and reference counts, so making
    // one private copies both arrays of the slot.
    pub(crate) fn private_p_slot(&mut self, lambda: usize, ell: usize) -> usize {
        let (s, from) = self.make_private(lambda, ell);
        if let Some(old) = from {
            self.copy_slot(lambda, old, s);
        }
        s
    }

    pub(crate) fn private_c_slot(&mut self, lambda: usize, ell: usize) -> usize {
        self.private_p_slot(lambda, ell)
    }

    fn copy_slot(&mut self, lambda: usize, from: usize, to: usize) {
        let len = self.p_bank[lambda][from].len();
        let (src, dst) = pair_mut(&mut self.p_bank[lambda], from, to);
        dst.copy_from(src);
        let (src, dst) = pair_mut(&mut self.c_bank[lambda], from, to);
        dst.copy_from(src);
        self.copied_elements += 2 * len as u64;
    }

    /// Slot for a read, honouring the copy-on-read default.
    #[inline]
    pub(crate) fn read_slot(&mut self, lambda: usize, ell: usize) -> usize {
        if self.copy_on_write_only {
            self.path_to_slot[lambda][ell]
        } else {
            self.private_p_slot(lambda, ell)
        }
    }

    pub fn is_active(&self, ell: usize) -> bool {
        ell < self.list_size && self.active[ell]
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn active_paths(&self) -> Vec<usize> {
        (0..self.list_size).filter(|&l| self.active[l]).collect()
    }

    pub fn slot_of(&self, lambda: u32, ell: usize) -> usize {
        self.path_to_slot[lambda as usize][ell]
    }

    pub fn reference_count(&self, lambda: u32, slot: usize) -> usize {
        self.ref_count[lambda as usize][slot]
    }

    pub fn free_slot_count(&self, lambda: u32) -> usize {
        self.inactive_slots[lambda as usize].len()
    }

    pub fn free_path_count(&self) -> usize {
        self.inactive_paths.len()
    }

    /// Array elements copied so far (probability pairs plus bit pairs).
    pub fn copied_elements(&self) -> u64 {
        self.copied_elements
    }

    /// `(probability-pair cells, bit-pair cells)` allocated across all banks.
    pub fn bank_cells(&self) -> (usize, usize) {
        let p = self.p_bank.iter().flatten().map(Cells::len).sum();
        let c = self.c_bank.iter().flatten().map(BitPairArray::len).sum();
        (p, c)
    }

    /// Checks the bookkeeping invariants: activity flags agree with the free
    /// path stack, a slot is free iff its count is zero, and every count
    /// equals the number of active paths pointing at the slot.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let active = self.active_count();
        if self.initial_assigned && !(1..=self.list_size).contains(&active) {
            return Err(format!("{active} active paths outside [1, {}]", self.list_size));
        }
        for ell in 0..self.list_size {
            if self.active[ell] == self.inactive_paths.contains(ell) {
                return Err(format!("path {ell}: active flag disagrees with free stack"));
            }
        }
        if self.inactive_paths.len() + active != self.list_size {
            return Err("free path stack size mismatch".into());
        }
        for lambda in 0..=self.m as usize {
            let mut expected = vec![0usize; self.list_size];
            for ell in (0..self.list_size).filter(|&l| self.active[l]) {
                expected[self.path_to_slot[lambda][ell]] += 1;
            }
            for s in 0..self.list_size {
                let count = self.ref_count[lambda][s];
                if count != expected[s] {
                    return Err(format!(
                        "layer {lambda} slot {s}: count {count} but {} referencing paths",
                        expected[s]
                    ));
                }
                if (count == 0) != self.inactive_slots[lambda].contains(s) {
                    return Err(format!("layer {lambda} slot {s}: free stack disagrees with count {count}"));
                }
            }
        }
        Ok(())
    }

    fn require_active(&self, ell: usize) -> Result<()> {
        if !self.is_active(ell) {
            return Err(Error::state(format!("path {ell} is not active")));
        }
        Ok(())
    }

    fn require_layer(&self, lambda: u32) -> Result<()> {
        if lambda > self.m {
            return Err(Error::arg(format!("layer {lambda} exceeds m = {}", self.m)));
        }
        Ok(())
    }
}

/// Two distinct mutable elements of a slice: `(&v[a], &mut v[b])`.
fn pair_mut<X>(v: &mut [X], a: usize, b: usize) -> (&X, &mut X) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}
