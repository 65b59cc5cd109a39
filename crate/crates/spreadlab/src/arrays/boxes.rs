use serde::Serialize;

use super::index::Subset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxKind {
    Full,
    Face,
}

/// A sequence `(H_1, …, H_d)` of sets of size 1 or 2 with
/// `max H_i < min H_{i+1}`; its members pick one point from each `H_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoxSpec {
    pub pairs: Vec<Subset>,
}

impl BoxSpec {
    pub fn new(pairs: Vec<Subset>) -> Result<Self> {
        for (i, h) in pairs.iter().enumerate() {
            if h.is_empty() || h.len() > 2 {
                return Err(Error::Domain(format!(
                    "H_{} = {h} must have 1 or 2 elements",
                    i + 1
                )));
            }
            if i > 0 && pairs[i - 1].max_elem() >= h.min_elem() {
                return Err(Error::Domain("the H_i must be increasing".into()));
            }
        }
        Ok(BoxSpec { pairs })
    }

    /// The standard box `({1,2}, {3,4}, …)` of dimension `d`.
    pub fn standard(d: usize) -> Self {
        BoxSpec {
            pairs: (0..d)
                .map(|i| Subset::of(&[2 * i + 1, 2 * i + 2]))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_full(&self) -> bool {
        self.pairs.iter().all(|h| h.len() == 2)
    }

    pub fn vertices(&self) -> Subset {
        self.pairs.iter().fold(Subset::EMPTY, |a, &b| a.union(b))
    }

    /// `Box(ℋ)`, in colex order.
    pub fn members(&self) -> Vec<Subset> {
        let mut out = vec![Subset::EMPTY];
        for h in &self.pairs {
            out = out
                .iter()
                .flat_map(|s| h.iter().map(move |e| s.with(e)))
                .collect();
        }
        out.sort();
        out
    }
}

/// Every full box (`Σ|H_i| = 2d`) or face (`Σ|H_i| = 2d − 1`) of `[n]`, each
/// once, ordered by vertex set (colex) and then by the position of the
/// singleton.
pub fn enumerate_boxes(n: usize, d: usize, kind: BoxKind) -> Result<Vec<BoxSpec>> {
    let width = match kind {
        BoxKind::Full => 2 * d,
        BoxKind::Face => 2 * d - 1,
    };
    if d == 0 || n < width {
        return Err(Error::Domain(format!(
            "n={n} too small for a {kind:?} box of dimension {d}"
        )));
    }
    let mut out = Vec::new();
    for vs in Subset::range(n).k_subsets(width) {
        let e = vs.elems();
        match kind {
            BoxKind::Full => out.push(BoxSpec {
                pairs: e.chunks(2).map(Subset::of).collect(),
            }),
            BoxKind::Face => {
                for single in 0..d {
                    let mut pairs = Vec::with_capacity(d);
                    let mut p = 0;
                    for i in 0..d {
                        let w = if i == single { 1 } else { 2 };
                        pairs.push(Subset::of(&e[p..p + w]));
                        p += w;
                    }
                    out.push(BoxSpec { pairs });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let b = enumerate_boxes(4, 2, BoxKind::Full).unwrap();
        assert_eq!(
            b,
            vec![BoxSpec::new(vec![Subset::of(&[1, 2]), Subset::of(&[3, 4])]).unwrap()]
        );
        assert_eq!(enumerate_boxes(5, 2, BoxKind::Full).unwrap().len(), 5);
        let f = enumerate_boxes(3, 2, BoxKind::Face).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].pairs, vec![Subset::of(&[1]), Subset::of(&[2, 3])]);
        assert_eq!(f[1].pairs, vec![Subset::of(&[1, 2]), Subset::of(&[3])]);
        assert!(enumerate_boxes(3, 2, BoxKind::Full).is_err());
    }

    #[test]
    fn members_of_standard_box() {
        let m = BoxSpec::standard(2).members();
        assert_eq!(
            m,
            vec![
                Subset::of(&[1, 3]),
                Subset::of(&[2, 3]),
                Subset::of(&[1, 4]),
                Subset::of(&[2, 4])
            ]
        );
        assert_eq!(BoxSpec::standard(3).members().len(), 8);
    }
}
