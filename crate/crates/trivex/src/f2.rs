//! Packed bit-vectors over F2 and row-echelon elimination.
//!
//! Exponent vectors of power-commutator presentations, relation tables and
//! the tail-elimination step of the quotient algorithm all live over F2, so
//! a small dedicated kit beats dragging in a general linear algebra crate.

use std::fmt;

/// A fixed-length vector over F2, packed into 64-bit limbs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    len: usize,
    limbs: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            limbs: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut b = Bits::zeros(len);
        b.set(i, true);
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.limbs[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.limbs[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(w, &limb)| {
            let mut l = limb;
            std::iter::from_fn(move || {
                if l == 0 {
                    None
                } else {
                    let t = l.trailing_zeros() as usize;
                    l &= l - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    pub fn highest_one(&self) -> Option<usize> {
        for (w, &limb) in self.limbs.iter().enumerate().rev() {
            if limb != 0 {
                return Some(w * 64 + 63 - limb.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn lowest_one(&self) -> Option<usize> {
        self.ones().next()
    }

    /// Keeps the first `new_len` coordinates.
    pub fn truncated(&self, new_len: usize) -> Bits {
        assert!(new_len <= self.len);
        let mut out = Bits::zeros(new_len);
        for i in self.ones() {
            if i < new_len {
                out.set(i, true);
            } else {
                break;
            }
        }
        out
    }

    /// Extends with zero coordinates up to `new_len`.
    pub fn extended(&self, new_len: usize) -> Bits {
        assert!(new_len >= self.len);
        let mut out = Bits::zeros(new_len);
        out.limbs[..self.limbs.len()].copy_from_slice(&self.limbs);
        out
    }

    /// Lowercase hex of the packed limbs, little-endian limb order,
    /// exactly `ceil(len/4)` digits. Stable across runs; used for the
    /// serialized relation tables.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let mut nib = 0u8;
            for b in 0..4 {
                let i = d * 4 + b;
                if i < self.len && self.get(i) {
                    nib |= 1 << b;
                }
            }
            s.push(char::from_digit(nib as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(s: &str, len: usize) -> Option<Bits> {
        if s.len() != len.div_ceil(4) {
            return None;
        }
        let mut out = Bits::zeros(len);
        for (d, c) in s.chars().enumerate() {
            let nib = c.to_digit(16)? as u8;
            for b in 0..4 {
                let i = d * 4 + b;
                if nib >> b & 1 == 1 {
                    if i >= len {
                        return None;
                    }
                    out.set(i, true);
                }
            }
        }
        Some(out)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Mutually reduced row set over F2 with the pivot of each row at its
/// highest set coordinate. Rows stay pairwise reduced, so the expression
/// of a pivot coordinate in terms of non-pivot ones can be read off a row.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Bits>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    /// Reduces `v` by the current rows. Rows are pairwise reduced (each
    /// contains no pivot but its own), so one pass eliminates every pivot
    /// coordinate of `v` and introduces none.
    pub fn reduce(&self, mut v: Bits) -> Bits {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Inserts a row; returns whether the rank grew.
    pub fn add_row(&mut self, v: Bits) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.highest_one() else {
            return false;
        };
        for r in 0..self.rows.len() {
            if self.rows[r].get(p) {
                self.rows[r].xor_assign(&v);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn is_pivot(&self, coord: usize) -> bool {
        self.pivots.contains(&coord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_round_trip() {
        let mut b = Bits::zeros(13);
        b.set(0, true);
        b.set(5, true);
        b.set(12, true);
        let h = b.to_hex();
        assert_eq!(Bits::from_hex(&h, 13), Some(b));
    }

    #[test]
    fn ones_ascending() {
        let mut b = Bits::zeros(130);
        for i in [0, 63, 64, 65, 129] {
            b.set(i, true);
        }
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 63, 64, 65, 129]);
        assert_eq!(b.highest_one(), Some(129));
        assert_eq!(b.lowest_one(), Some(0));
    }

    #[test]
    fn echelon_solves_small_system() {
        // x0 + x1 = 0, x1 + x2 = 0 over F2: rank 2, pivots at 1 and 2.
        let mut e = Echelon::new();
        let mut r1 = Bits::zeros(3);
        r1.set(0, true);
        r1.set(1, true);
        let mut r2 = Bits::zeros(3);
        r2.set(1, true);
        r2.set(2, true);
        assert!(e.add_row(r1.clone()));
        assert!(e.add_row(r2));
        assert!(!e.add_row(r1));
        assert_eq!(e.rank(), 2);
        let mut sum = Bits::zeros(3);
        sum.set(0, true);
        sum.set(2, true);
        // x0 + x2 is in the row space.
        assert!(e.reduce(sum).is_zero());
    }

    proptest! {
        #[test]
        fn xor_is_involutive(idx in proptest::collection::vec(0usize..200, 0..40),
                             idy in proptest::collection::vec(0usize..200, 0..40)) {
            let mut a = Bits::zeros(200);
            for i in idx { a.flip(i); }
            let mut b = Bits::zeros(200);
            for i in idy { b.flip(i); }
            let mut c = a.clone();
            c.xor_assign(&b);
            c.xor_assign(&b);
            prop_assert_eq!(a, c);
        }

        #[test]
        fn row_space_membership(rows in proptest::collection::vec(
                proptest::collection::vec(0usize..60, 0..10), 1..12),
                picks in proptest::collection::vec(proptest::bool::ANY, 12)) {
            let mut originals = Vec::new();
            let mut e = Echelon::new();
            for r in rows {
                let mut b = Bits::zeros(60);
                for i in r { b.flip(i); }
                originals.push(b.clone());
                e.add_row(b);
            }
            // any F2-combination of the original rows reduces to zero
            let mut combo = Bits::zeros(60);
            for (b, &take) in originals.iter().zip(&picks) {
                if take { combo.xor_assign(b); }
            }
            prop_assert!(e.reduce(combo).is_zero());
            // stored rows never contain a foreign pivot
            for (row, &p) in e.rows().iter().zip(e.pivots()) {
                for &q in e.pivots() {
                    if q != p { prop_assert!(!row.get(q)); }
                }
            }
        }
    }
}
