//! Finite posets, with a fixed linear extension.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite partial order. Elements are stored in a deterministic linear
/// extension (a stable topological sort of the input order), so `leq(i, j)`
/// implies `i <= j` as indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `relations` (pairs `a ⪯ b`)
    /// and rejects cycles.
    pub fn new<S: AsRef<str>>(labels: &[S], relations: &[(S, S)]) -> Result<Poset> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
        };
        let mut pairs = Vec::with_capacity(relations.len());
        for (a, b) in relations {
            pairs.push((lookup(a)?, lookup(b)?));
        }
        Poset::from_pairs(labels, &pairs)
    }

    /// Like [`Poset::new`] with elements named by index.
    pub fn from_indices(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(a.max(b).to_string()));
            }
        }
        Poset::from_pairs(labels, relations)
    }

    fn from_pairs(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Cycle(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        // Kahn's algorithm, always taking the earliest available input index.
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .find(|&c| !placed[c] && (0..n).all(|p| p == c || placed[p] || !leq[p][c]))
                .expect("acyclic");
            placed[next] = true;
            order.push(next);
        }
        let labels = order.iter().map(|&i| labels[i].clone()).collect();
        let leq = order
            .iter()
            .map(|&i| order.iter().map(|&j| leq[i][j]).collect())
            .collect();
        Ok(Poset { labels, leq })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    /// All pairs `(i, j)` with `i ⪯ j`, lexicographically.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.leq[i][j])
            .collect()
    }

    /// `0 ≺ 1 ≺ … ≺ n-1`.
    pub fn chain(n: usize) -> Poset {
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_indices(n, &rel).expect("chain is acyclic")
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_indices(n, &[]).expect("antichain")
    }

    /// Face poset of a simplicial complex given by its maximal (or all)
    /// simplices as vertex lists; faces ordered by inclusion. Labels are the
    /// sorted vertex lists joined by `-`.
    pub fn face_poset(simplices: &[Vec<usize>]) -> Poset {
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            for mask in 1u64..(1 << s.len()) {
                let f: Vec<usize> = (0..s.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| s[b])
                    .collect();
                if !faces.contains(&f) {
                    faces.push(f);
                }
            }
        }
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let labels: Vec<String> = faces
            .iter()
            .map(|f| {
                f.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("-")
            })
            .collect();
        let mut rel = Vec::new();
        for (i, a) in faces.iter().enumerate() {
            for (j, b) in faces.iter().enumerate() {
                if i != j && a.iter().all(|v| b.contains(v)) {
                    rel.push((labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Poset::new(&labels, &rel).expect("inclusion is a partial order")
    }

    /// Boundary of a triangle as a face poset: three vertices below three edges.
    pub fn hollow_triangle() -> Poset {
        Poset::face_poset(&[vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    /// `a ≺ b, a ≺ c, b ≺ d, c ≺ d`.
    pub fn diamond() -> Poset {
        Poset::new(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
        .expect("diamond is acyclic")
    }

    /// Disjoint union; labels of `other` get a `'` suffix when they collide.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut l = l.clone();
            while labels.contains(&l) {
                l.push('\'');
            }
            labels.push(l);
        }
        let n = self.len();
        let mut rel = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) {
                    rel.push((i, j));
                }
            }
        }
        for i in 0..other.len() {
            for j in 0..other.len() {
                if other.lt(i, j) {
                    rel.push((n + i, n + j));
                }
            }
        }
        Poset::from_pairs(labels, &rel).expect("union of posets")
    }

    /// Checks that `map` (indices into `target`) is order preserving.
    pub fn is_monotone(&self, target: &Poset, map: &[usize]) -> bool {
        map.len() == self.len()
            && map.iter().all(|&m| m < target.len())
            && (0..self.len()).all(|i| {
                (0..self.len()).all(|j| !self.leq(i, j) || target.leq(map[i], map[j]))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_extension() {
        let p = Poset::new(&["c", "b", "a"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(p.labels(), &["a", "b", "c"]);
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn cycle_is_rejected() {
        let e = Poset::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(e, Error::Cycle("a".into(), "b".into()));
    }

    #[test]
    fn unknown_label() {
        assert!(matches!(
            Poset::new(&["a"], &[("a", "z")]),
            Err(Error::UnknownElement(_))
        ));
    }

    #[test]
    fn hollow_triangle_shape() {
        let p = Poset::hollow_triangle();
        assert_eq!(p.len(), 6);
        assert_eq!(p.pairs().len(), 12);
    }

    #[test]
    fn face_poset_of_simplex() {
        let p = Poset::face_poset(&[vec![0, 1, 2]]);
        assert_eq!(p.len(), 7);
        // each vertex lies below two edges and the face, each edge below the face
        assert_eq!(p.pairs().len(), 7 + 3 * 3 + 3);
    }
}
