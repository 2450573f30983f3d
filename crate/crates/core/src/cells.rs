//! Fixed-size arrays that, in builds with debug assertions, track which cells
//! have been written and panic on a read of a never-written cell.

#[derive(Debug, Clone)]
pub struct Cells<T> {
    data: Vec<T>,
    #[cfg(debug_assertions)]
    written: Vec<bool>,
}

impl<T: Clone> Cells<T> {
    pub fn new(len: usize, fill: T) -> Self {
        Cells {
            data: vec![fill; len],
            #[cfg(debug_assertions)]
            written: vec![false; len],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    #[track_caller]
    pub fn get(&self, i: usize) -> &T {
        #[cfg(debug_assertions)]
        assert!(self.written[i], "read of unwritten cell {i}");
        &self.data[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: T) {
        #[cfg(debug_assertions)]
        {
            self.written[i] = true;
        }
        self.data[i] = value;
    }

    /// Mutable access for read-modify-write; the cell must already be written.
    #[inline]
    #[track_caller]
    pub fn get_mut(&mut self, i: usize) -> &mut T {
        #[cfg(debug_assertions)]
        assert!(self.written[i], "update of unwritten cell {i}");
        &mut self.data[i]
    }

    /// Mutable access that marks the cell written without requiring a prior write.
    #[inline]
    pub fn slot_mut(&mut self, i: usize) -> &mut T {
        #[cfg(debug_assertions)]
        {
            self.written[i] = true;
        }
        &mut self.data[i]
    }

    pub fn copy_from(&mut self, other: &Cells<T>) {
        self.data.clone_from_slice(&other.data);
        #[cfg(debug_assertions)]
        self.written.copy_from_slice(&other.written);
    }

    /// Raw contents, including never-written cells.
    pub fn raw(&self) -> &[T] {
        &self.data
    }
}

/// An array of [`BitPair`](crate::types::BitPair) cells with per-slot
/// write tracking.
#[derive(Debug, Clone)]
pub struct BitPairArray {
    slots: Cells<u8>,
}

impl BitPairArray {
    pub fn new(len: usize) -> Self {
        BitPairArray {
            slots: Cells::new(2 * len, 0),
        }
    }

    /// Number of bit pairs.
    #[inline]
    pub fn len(&self) -> usize {
        self.slots.len() / 2
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    #[inline]
    #[track_caller]
    pub fn get(&self, beta: usize, parity: usize) -> u8 {
        *self.slots.get(2 * beta + (parity & 1))
    }

    #[inline]
    pub fn set(&mut self, beta: usize, parity: usize, bit: u8) {
        self.slots.set(2 * beta + (parity & 1), bit);
    }

    pub fn pair(&self, beta: usize) -> crate::types::BitPair {
        let raw = self.slots.raw();
        crate::types::BitPair([raw[2 * beta], raw[2 * beta + 1]])
    }

    pub fn copy_from(&mut self, other: &BitPairArray) {
        self.slots.copy_from(&other.slots);
    }
}
