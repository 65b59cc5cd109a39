use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prob::binomial;

/// A finite subset of `[n]` with `n ≤ 64`, stored as a bitmask where bit `i`
/// stands for the element `i + 1`. Among sets of equal size, the numeric
/// order of the mask is the colexicographic order.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// From 1-based elements.
    pub fn of(elems: &[usize]) -> Subset {
        Subset::try_of(elems).expect("elements must lie in 1..=64")
    }

    pub fn try_of(elems: &[usize]) -> Result<Subset> {
        let mut m = 0u64;
        for &e in elems {
            if e == 0 || e > 64 {
                return Err(Error::Index(format!("element {e} outside 1..=64")));
            }
            m |= 1 << (e - 1);
        }
        Ok(Subset(m))
    }

    /// `{lo, lo+1, ..., hi}` (1-based, inclusive); empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Subset {
        if lo > hi || lo == 0 {
            return Subset::EMPTY;
        }
        let width = hi - lo + 1;
        let mask = if width >= 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        Subset(mask << (lo - 1))
    }

    /// `[n] = {1..n}`
    pub fn range(n: usize) -> Subset {
        Subset::interval(1, n)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e >= 1 && e <= 64 && self.0 >> (e - 1) & 1 == 1
    }

    pub fn max_elem(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn min_elem(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersect(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn minus(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn with(self, e: usize) -> Subset {
        Subset(self.0 | 1 << (e - 1))
    }

    pub fn without(self, e: usize) -> Subset {
        Subset(self.0 & !(1 << (e - 1)))
    }

    /// Elements in increasing order, 1-based.
    pub fn elems(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let e = m.trailing_zeros() as usize + 1;
            m &= m - 1;
            Some(e)
        })
    }

    /// The `i`-th smallest element (0-based position).
    pub fn nth(self, i: usize) -> Option<usize> {
        self.iter().nth(i)
    }

    /// Position of `e` among the elements of the set (0-based).
    pub fn position(self, e: usize) -> Option<usize> {
        self.contains(e)
            .then(|| (self.0 & ((1u64 << (e - 1)) - 1)).count_ones() as usize)
    }

    /// All `k`-subsets of `self`, in colex order.
    pub fn k_subsets(self, k: usize) -> Vec<Subset> {
        let elems = self.elems();
        let mut out = Vec::new();
        if k > elems.len() {
            return out;
        }
        if k == 0 {
            return vec![Subset::EMPTY];
        }
        // Gosper's hack over position masks; numeric order is colex order
        let limit: u128 = 1 << elems.len();
        let mut c: u128 = (1 << k) - 1;
        while c < limit {
            let mut m = 0u64;
            let mut bits = c;
            while bits != 0 {
                let p = bits.trailing_zeros() as usize;
                m |= 1 << (elems[p] - 1);
                bits &= bits - 1;
            }
            out.push(Subset(m));
            let u = c & c.wrapping_neg();
            let r = c + u;
            c = (((r ^ c) >> 2) / u) | r;
        }
        out
    }

    /// Image under the order isomorphism `from → to` (equal sizes).
    pub fn transport(self, from: Subset, to: Subset) -> Subset {
        let to_elems = to.elems();
        let mut m = 0u64;
        for e in self.iter() {
            let p = from.position(e).expect("element outside the source set");
            m |= 1 << (to_elems[p] - 1);
        }
        Subset(m)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Subset::try_of(&v).map_err(serde::de::Error::custom)
    }
}

/// The index set `C([n], d)` in colex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DSubsetIndex {
    pub n: usize,
    pub d: usize,
}

impl DSubsetIndex {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n || n > 64 {
            return Err(Error::Domain(format!(
                "need 1 ≤ d ≤ n ≤ 64, got n={n}, d={d}"
            )));
        }
        Ok(DSubsetIndex { n, d })
    }

    pub fn len(&self) -> usize {
        binomial(self.n as u64, self.d as u64) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Combinatorial number system: rank = Σ_j C(e_j − 1, j) over the
    /// sorted elements `e_1 < … < e_d` (1-based).
    pub fn rank(&self, s: Subset) -> Result<usize> {
        self.validate(s)?;
        Ok(s.iter()
            .enumerate()
            .map(|(j, e)| binomial(e as u64 - 1, j as u64 + 1) as usize)
            .sum())
    }

    pub fn unrank(&self, mut r: usize) -> Result<Subset> {
        if r >= self.len() {
            return Err(Error::Index(format!("rank {r} ≥ C({},{})", self.n, self.d)));
        }
        let mut m = 0u64;
        for j in (1..=self.d).rev() {
            // largest c with C(c, j) ≤ r
            let mut c = j - 1;
            while binomial(c as u64 + 1, j as u64) as usize <= r {
                c += 1;
            }
            r -= binomial(c as u64, j as u64) as usize;
            m |= 1 << c;
        }
        Ok(Subset(m))
    }

    pub fn validate(&self, s: Subset) -> Result<()> {
        if s.len() != self.d {
            return Err(Error::Index(format!("{s} is not a {}-subset", self.d)));
        }
        if s.max_elem().unwrap_or(0) > self.n {
            return Err(Error::Index(format!("{s} is not inside [{}]", self.n)));
        }
        Ok(())
    }

    pub fn all(&self) -> Vec<Subset> {
        Subset::range(self.n).k_subsets(self.d)
    }
}

/// `C(J, d)` in colex order.
pub fn d_subsets_of(j: Subset, d: usize) -> Vec<Subset> {
    j.k_subsets(d)
}

/// Union of a family of sets.
pub fn support(family: &[Subset]) -> Subset {
    family.iter().fold(Subset::EMPTY, |a, &b| a.union(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_enumeration_matches_rank() {
        let idx = DSubsetIndex::new(7, 3).unwrap();
        let all = idx.all();
        assert_eq!(all.len(), 35);
        for (r, s) in all.iter().enumerate() {
            assert_eq!(idx.rank(*s).unwrap(), r);
            assert_eq!(idx.unrank(r).unwrap(), *s);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], Subset::of(&[1, 2, 3]));
        assert_eq!(all[1], Subset::of(&[1, 2, 4]));
        assert_eq!(all[2], Subset::of(&[1, 3, 4]));
    }

    #[test]
    fn subset_basics() {
        let s = Subset::of(&[2, 5, 9]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.max_elem(), Some(9));
        assert_eq!(s.min_elem(), Some(2));
        assert_eq!(s.position(5), Some(1));
        assert_eq!(s.to_string(), "{2,5,9}");
        assert_eq!(Subset::interval(3, 5), Subset::of(&[3, 4, 5]));
        let t = Subset::of(&[2, 5]).transport(s, Subset::of(&[1, 2, 3]));
        assert_eq!(t, Subset::of(&[1, 2]));
        assert_eq!(Subset::range(64).len(), 64);
    }

    #[test]
    fn k_subsets_edge_cases() {
        assert_eq!(Subset::range(4).k_subsets(0), vec![Subset::EMPTY]);
        assert_eq!(Subset::range(4).k_subsets(4), vec![Subset::range(4)]);
        assert!(Subset::range(3).k_subsets(4).is_empty());
        assert_eq!(Subset::of(&[2, 4, 6]).k_subsets(2).len(), 3);
    }
}
