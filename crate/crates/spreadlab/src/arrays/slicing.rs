use serde::Serialize;

use super::index::Subset;
use crate::error::{Error, Result};

/// Partition of a family of `d`-sets by maximum element: slice `i` is
/// `{t ∪ {r_i} : t ∈ 𝒢_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlicingProfile {
    pub u: usize,
    pub r: Vec<usize>,
    pub groups: Vec<Vec<Subset>>,
    pub profile: Vec<usize>,
}

pub fn slicing(family: &[Subset]) -> Result<SlicingProfile> {
    if family.is_empty() {
        return Err(Error::Domain("slicing needs a nonempty family".into()));
    }
    let d = family[0].len();
    if d == 0 || family.iter().any(|s| s.len() != d) {
        return Err(Error::Domain(
            "slicing needs sets of one common positive size".into(),
        ));
    }
    let mut sorted: Vec<Subset> = family.to_vec();
    sorted.sort_by_key(|s| (s.max_elem(), *s));
    sorted.dedup();
    let mut r = Vec::new();
    let mut groups: Vec<Vec<Subset>> = Vec::new();
    for s in sorted {
        let m = s.max_elem().expect("nonempty");
        if r.last() != Some(&m) {
            r.push(m);
            groups.push(Vec::new());
        }
        groups.last_mut().expect("pushed").push(s.without(m));
    }
    let profile = groups.iter().map(Vec::len).collect();
    Ok(SlicingProfile {
        u: r.len(),
        r,
        groups,
        profile,
    })
}

impl SlicingProfile {
    pub fn reconstruct(&self) -> Vec<Subset> {
        let mut out: Vec<Subset> = self
            .r
            .iter()
            .zip(&self.groups)
            .flat_map(|(&ri, g)| g.iter().map(move |t| t.with(ri)))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_family() {
        let f: Vec<Subset> = [[1, 3], [1, 6], [2, 3], [2, 5], [4, 5]]
            .iter()
            .map(|e| Subset::of(e))
            .collect();
        let sp = slicing(&f).unwrap();
        assert_eq!(sp.r, vec![3, 5, 6]);
        assert_eq!(sp.profile, vec![2, 2, 1]);
        let mut g = f.clone();
        g.sort();
        assert_eq!(sp.reconstruct(), g);
    }

    #[test]
    fn singleton_and_complete() {
        let sp = slicing(&[Subset::of(&[1, 2])]).unwrap();
        assert_eq!(
            (sp.u, sp.r.clone(), sp.profile.clone()),
            (1, vec![2], vec![1])
        );
        let sp = slicing(&Subset::range(4).k_subsets(2)).unwrap();
        assert_eq!(sp.r, vec![2, 3, 4]);
        assert_eq!(sp.profile, vec![1, 2, 3]);
    }
}
