//! Exact counting over latent labelings `ξ ∈ V^{vertices}` for arrays of the
//! form `X_s = 1_A(ξ_{i_1}, …, ξ_{i_d})`.

use super::index::Subset;
use crate::error::{pow_sat, Limits, Result};

/// A subset `A ⊆ V^d` stored as a membership vector in mixed radix
/// (first coordinate most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSet {
    pub v: usize,
    pub d: usize,
    pub members: Vec<bool>,
}

impl TupleSet {
    pub fn empty(v: usize, d: usize) -> Self {
        TupleSet {
            v,
            d,
            members: vec![false; v.pow(d as u32)],
        }
    }

    pub fn index(&self, labels: &[usize]) -> usize {
        labels.iter().fold(0, |a, &x| a * self.v + x)
    }

    pub fn labels(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.v;
            idx /= self.v;
        }
        out
    }

    pub fn insert(&mut self, labels: &[usize]) {
        let i = self.index(labels);
        self.members[i] = true;
    }

    pub fn contains(&self, labels: &[usize]) -> bool {
        self.members[self.index(labels)]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Close under coordinate permutations; returns how many tuples were added.
    pub fn symmetrize(&mut self) -> usize {
        let mut added = 0;
        for idx in 0..self.members.len() {
            if !self.members[idx] {
                continue;
            }
            let mut labels = self.labels(idx);
            labels.sort_unstable();
            for p in permutations_of(&labels) {
                let j = self.index(&p);
                if !self.members[j] {
                    self.members[j] = true;
                    added += 1;
                }
            }
        }
        added
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.members.len()).all(|idx| {
            let labels = self.labels(idx);
            permutations_of(&labels)
                .iter()
                .all(|p| self.members[self.index(p)] == self.members[idx])
        })
    }

    /// Number of `ξ ∈ V^{∪ keys}` with `1_A(ξ_s) = want` for every constraint
    /// `(s, want)`, together with the exponent `|∪ keys|`. Each constraint is
    /// tested as soon as its largest vertex has been labelled.
    pub fn count(&self, constraints: &[(Subset, bool)], limits: &Limits) -> Result<(u128, usize)> {
        let sup = constraints
            .iter()
            .fold(Subset::EMPTY, |a, &(s, _)| a.union(s));
        let verts = sup.elems();
        let m = verts.len();
        limits.check(
            format!("latent labelings V^{m} with |V|={}", self.v),
            pow_sat(self.v as u128, m as u32),
        )?;
        let mut at: Vec<Vec<(Vec<usize>, bool)>> = vec![Vec::new(); m];
        for &(s, want) in constraints {
            let pos: Vec<usize> = s
                .iter()
                .map(|e| sup.position(e).expect("in support"))
                .collect();
            let last = *pos.last().expect("nonempty index set");
            at[last].push((pos, want));
        }
        let mut assign = vec![0usize; m];
        Ok((self.walk(0, &mut assign, &at), m))
    }

    fn walk(&self, depth: usize, assign: &mut [usize], at: &[Vec<(Vec<usize>, bool)>]) -> u128 {
        if depth == assign.len() {
            return 1;
        }
        let mut total = 0u128;
        'label: for x in 0..self.v {
            assign[depth] = x;
            for (pos, want) in &at[depth] {
                let idx = pos.iter().fold(0, |a, &p| a * self.v + assign[p]);
                if self.members[idx] != *want {
                    continue 'label;
                }
            }
            total += self.walk(depth + 1, assign, at);
        }
        total
    }
}

/// All distinct orderings of a sorted multiset.
pub fn permutations_of(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_multiset() {
        assert_eq!(permutations_of(&[0, 1, 1]).len(), 3);
        assert_eq!(permutations_of(&[0, 1, 2]).len(), 6);
        assert_eq!(permutations_of(&[]).len(), 1);
    }

    #[test]
    fn equality_set_path_count() {
        let mut a = TupleSet::empty(2, 2);
        a.insert(&[0, 0]);
        a.insert(&[1, 1]);
        assert!(a.is_symmetric());
        let cons = [(Subset::of(&[1, 2]), true), (Subset::of(&[2, 3]), true)];
        let (c, m) = a.count(&cons, &Limits::default()).unwrap();
        assert_eq!((c, m), (2, 3));
    }
}
