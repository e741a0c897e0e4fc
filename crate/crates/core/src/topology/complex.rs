use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::TopologyError;
use crate::exact_math::{int, SparseMatrix};

/// An abstract simplicial complex on vertices `0..n`, where the index order
/// is the vertex total order. Simplices are stored as sorted index lists,
/// grouped by dimension. With a skeleton limit only simplices of dimension
/// at most that limit are stored, and the complex is downward closed below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_names: Vec<String>,
    simplices: Vec<BTreeSet<Vec<usize>>>,
    skeleton_limit: Option<usize>,
}

impl SimplicialComplex {
    /// The complex with every vertex and nothing else.
    pub fn new(vertex_names: Vec<String>, skeleton_limit: Option<usize>) -> Self {
        let vertices = (0..vertex_names.len()).map(|v| vec![v]).collect();
        Self {
            vertex_names,
            simplices: vec![vertices],
            skeleton_limit,
        }
    }

    /// Downward closure of `maximal`, truncated at the skeleton limit.
    pub fn from_maximal(
        vertex_names: Vec<String>,
        maximal: &[Vec<usize>],
        skeleton_limit: Option<usize>,
    ) -> Self {
        let mut complex = Self::new(vertex_names, skeleton_limit);
        for face in maximal {
            let mut sorted = face.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let top = match skeleton_limit {
                Some(limit) => (limit + 1).min(sorted.len()),
                None => sorted.len(),
            };
            for size in 1..=top {
                for subset in subsets_of_size(&sorted, size) {
                    complex.insert_unchecked(subset);
                }
            }
        }
        complex
    }

    /// Stores a sorted simplex without checking its faces.
    pub(crate) fn insert_unchecked(&mut self, simplex: Vec<usize>) {
        let d = simplex.len() - 1;
        while self.simplices.len() <= d {
            self.simplices.push(BTreeSet::new());
        }
        self.simplices[d].insert(simplex);
    }

    /// Inserts a simplex (any vertex order) together with all of its faces
    /// up to the skeleton limit.
    pub fn insert(&mut self, simplex: &[usize]) -> Result<(), TopologyError> {
        let mut sorted = simplex.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(TopologyError::Invalid("empty simplex".into()));
        }
        if let Some(&v) = sorted.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(TopologyError::Invalid(format!("unknown vertex {v}")));
        }
        if let Some(limit) = self.skeleton_limit {
            if sorted.len() > limit + 1 {
                return Err(TopologyError::SkeletonTooShallow {
                    needed: sorted.len() - 1,
                    limit,
                });
            }
        }
        for size in 1..=sorted.len() {
            for subset in subsets_of_size(&sorted, size) {
                self.insert_unchecked(subset);
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn skeleton_limit(&self) -> Option<usize> {
        self.skeleton_limit
    }

    /// Highest dimension with at least one stored simplex.
    pub fn dimension(&self) -> usize {
        self.simplices
            .iter()
            .rposition(|s| !s.is_empty())
            .unwrap_or(0)
    }

    /// `i`-simplices in lexicographic order.
    pub fn simplices(&self, i: usize) -> Vec<&Vec<usize>> {
        self.simplices.get(i).map(|s| s.iter().collect()).unwrap_or_default()
    }

    pub fn count(&self, i: usize) -> usize {
        self.simplices.get(i).map_or(0, BTreeSet::len)
    }

    /// Number of simplices per dimension, from 0 to [`Self::dimension`].
    pub fn counts(&self) -> Vec<usize> {
        (0..=self.dimension()).map(|i| self.count(i)).collect()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        match simplex.len() {
            0 => true,
            len => self.simplices.get(len - 1).is_some_and(|s| s.contains(simplex)),
        }
    }

    pub fn names_of(&self, simplex: &[usize]) -> Vec<String> {
        simplex.iter().map(|&v| self.vertex_names[v].clone()).collect()
    }

    /// Every codimension-one face of every stored simplex is stored.
    pub fn is_downward_closed(&self) -> bool {
        self.simplices.iter().skip(1).all(|level| {
            level.iter().all(|s| {
                (0..s.len()).all(|skip| {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    self.contains(&face)
                })
            })
        })
    }

    /// The same complex with vertex `v` renamed to `perm[v]`; the new index
    /// order is the new vertex order.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, TopologyError> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(TopologyError::Invalid("relabeling is not a permutation".into()));
        }
        let mut names = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.vertex_names[old].clone();
        }
        let mut out = Self::new(names, self.skeleton_limit);
        for level in self.simplices.iter().skip(1) {
            for s in level {
                let mut mapped: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
                mapped.sort_unstable();
                out.insert_unchecked(mapped);
            }
        }
        Ok(out)
    }

    fn require(&self, i: usize) -> Result<(), TopologyError> {
        match self.skeleton_limit {
            Some(limit) if i > limit => Err(TopologyError::SkeletonTooShallow { needed: i, limit }),
            _ => Ok(()),
        }
    }
}

/// All `size`-element subsets of a sorted slice, in lexicographic order.
pub(crate) fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Matrix of `∂_i`: one column per `i`-simplex, one row per `(i-1)`-simplex,
/// both in lexicographic order. The entry for dropping the vertex in
/// position `p` is `(-1)^p`. `∂_0` is the zero map, returned as a matrix with
/// no rows.
pub fn boundary_matrix(complex: &SimplicialComplex, i: usize) -> Result<SparseMatrix, TopologyError> {
    complex.require(i)?;
    let cols = complex.simplices(i);
    if i == 0 {
        return Ok(SparseMatrix::new(0, cols.len()));
    }
    let rows = complex.simplices(i - 1);
    let mut m = SparseMatrix::new(rows.len(), cols.len());
    for (c, simplex) in cols.iter().enumerate() {
        for skip in 0..simplex.len() {
            let face: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != skip)
                .map(|(_, &v)| v)
                .collect();
            let r = rows.binary_search(&&face).map_err(|_| {
                TopologyError::Invalid(format!("face {face:?} of {simplex:?} is not stored"))
            })?;
            m.set(r, c, int(if skip % 2 == 0 { 1 } else { -1 }));
        }
    }
    Ok(m)
}

/// Ranks and Betti number in one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub dimension: usize,
    /// Number of `i`-simplices.
    pub chain_dim: usize,
    /// `rank ∂_i`; zero for `i = 0` because `∂_0 = 0`.
    pub rank_boundary: usize,
    /// `rank ∂_{i+1}`.
    pub rank_next_boundary: usize,
    /// `(chain_dim - rank_boundary) - rank_next_boundary`.
    pub betti: usize,
}

impl BettiReport {
    pub fn kernel_dim(&self) -> usize {
        self.chain_dim - self.rank_boundary
    }
}

/// Rational Betti number `β_i = dim ker ∂_i - rank ∂_{i+1}`. Needs the
/// complex to store dimension `i + 1`.
pub fn betti(complex: &SimplicialComplex, i: usize) -> Result<BettiReport, TopologyError> {
    complex.require(i + 1)?;
    let d_i = boundary_matrix(complex, i)?;
    let d_next = boundary_matrix(complex, i + 1)?;
    let rank_boundary = d_i.rank();
    let rank_next_boundary = d_next.rank();
    let chain_dim = d_i.cols();
    Ok(BettiReport {
        dimension: i,
        chain_dim,
        rank_boundary,
        rank_next_boundary,
        betti: chain_dim - rank_boundary - rank_next_boundary,
    })
}
