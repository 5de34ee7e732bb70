//! The cube of resolutions, the Khovanov colouring and (un)normalised homology.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::coloured::{homology, ColouredPoset};
use crate::linalg::{complex_homology, CoeffRing, ExactMatrix, FreeChainComplex, Scalar, SparseVec};
use crate::poset::Poset;

use super::diagram::{LinkDiagram, Resolution};
use super::KhovanovError;

/// Basis vectors of `V^{(x)k}` are bitmasks over circles: bit set = `x`, clear = `1`.
pub(crate) fn tensor_degree(k: usize, mask: usize) -> i64 {
    k as i64 - 2 * mask.count_ones() as i64
}

/// Quantum degree of a basis vector at vertex `alpha`: generator degrees plus `rk(alpha)`.
pub(crate) fn q_degree(r: &Resolution, mask: usize) -> i64 {
    tensor_degree(r.k(), mask) + r.rank() as i64
}

/// The merge or split map `V^{(x)k_a} -> V^{(x)k_b}` for `b = a + {c}`, without cube signs.
pub(crate) fn edge_map(ring: CoeffRing, a: &Resolution, b: &Resolution) -> Result<ExactMatrix, KhovanovError> {
    // images of circles of `a` in `b`; crossingless circles match by position
    let image = |circle: &Vec<usize>, i: usize, from: &Resolution, to: &Resolution| -> BTreeSet<usize> {
        if circle.is_empty() {
            BTreeSet::from([to.k() - (from.k() - i)])
        } else {
            circle.iter().map(|&arc| to.circle_of_arc[arc]).collect()
        }
    };
    let forward: Vec<BTreeSet<usize>> = a.circles.iter().enumerate().map(|(i, c)| image(c, i, a, b)).collect();
    let mut backward: Vec<Vec<usize>> = vec![Vec::new(); b.k()];
    for (i, imgs) in forward.iter().enumerate() {
        for &j in imgs {
            backward[j].push(i);
        }
    }
    let merge = backward.iter().position(|v| v.len() == 2);
    let split = forward.iter().position(|v| v.len() == 2);
    if merge.is_some() == split.is_some() {
        return Err(KhovanovError::NotPlanar);
    }
    let columns: Vec<SparseVec> = (0..1usize << a.k())
        .map(|mask| {
            let bit = |i: usize| mask >> i & 1;
            let mut base = 0usize;
            for (i, imgs) in forward.iter().enumerate() {
                if imgs.len() == 1 {
                    let j = *imgs.iter().next().expect("one image");
                    if backward[j].len() == 1 {
                        base |= bit(i) << j;
                    }
                }
            }
            let mut targets: Vec<usize> = Vec::new();
            match (merge, split) {
                (Some(j), None) => {
                    let (i1, i2) = (backward[j][0], backward[j][1]);
                    if bit(i1) + bit(i2) < 2 {
                        targets.push(base | (bit(i1) | bit(i2)) << j);
                    }
                }
                (None, Some(i)) => {
                    let mut js = forward[i].iter().copied();
                    let (j1, j2) = (js.next().expect("two images"), js.next().expect("two images"));
                    if bit(i) == 1 {
                        targets.push(base | 1 << j1 | 1 << j2);
                    } else {
                        targets.push(base | 1 << j1);
                        targets.push(base | 1 << j2);
                    }
                }
                _ => unreachable!("exactly one of merge and split"),
            }
            SparseVec::from_entries(ring, targets.into_iter().map(|t| (t, Scalar::ONE)).collect())
        })
        .collect();
    Ok(ExactMatrix::from_columns(ring, 1 << b.k(), columns))
}

/// The Khovanov colouring of the Boolean lattice on the crossings: `alpha -> V^{(x)k_alpha}`
/// with merge and split maps along covers.
pub fn khovanov_colouring(d: &LinkDiagram, ring: CoeffRing) -> Result<ColouredPoset, KhovanovError> {
    colouring(d, ring, None)
}

/// The part of the Khovanov colouring in quantum degree `j`.
pub fn khovanov_colouring_graded(d: &LinkDiagram, ring: CoeffRing, j: i64) -> Result<ColouredPoset, KhovanovError> {
    colouring(d, ring, Some(j))
}

fn colouring(d: &LinkDiagram, ring: CoeffRing, j: Option<i64>) -> Result<ColouredPoset, KhovanovError> {
    let n = d.crossing_count();
    let poset = Poset::boolean(n);
    let states: Vec<Resolution> = (0..1u64 << n).map(|a| d.resolve(a)).collect();
    let keep = |r: &Resolution| -> Vec<usize> {
        (0..1usize << r.k()).filter(|&m| j.is_none_or(|j| q_degree(r, m) == j)).collect()
    };
    let kept: Vec<Vec<usize>> = states.iter().map(keep).collect();
    let mut covers = HashMap::new();
    for (x, y) in poset.covers() {
        let m = edge_map(ring, &states[x], &states[y])?;
        covers.insert((x, y), if j.is_some() { m.select(&kept[y], &kept[x]) } else { m });
    }
    let dims = kept.iter().map(Vec::len).collect();
    Ok(ColouredPoset::new(poset, ring, dims, covers)?)
}

/// The Khovanov complex of the sub-cube `{base | beta : beta over the crossings in varying}`.
///
/// Degree `i = |varying| - rk(beta)`; the quantum degree of a basis vector is
/// its generator degree plus the full rank of its vertex.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub complex: FreeChainComplex,
    /// Quantum degree of every basis vector, per homological degree.
    pub q_degrees: Vec<Vec<i64>>,
    /// Vertices (full resolutions) in each degree with their offsets.
    pub vertices: Vec<Vec<(u64, usize)>>,
}

fn embed(beta: u64, varying: &[usize]) -> u64 {
    varying.iter().enumerate().filter(|(b, _)| beta >> b & 1 == 1).fold(0, |acc, (_, &c)| acc | 1 << c)
}

impl CubeComplex {
    pub fn new(d: &LinkDiagram, ring: CoeffRing, base: u64, varying: &[usize]) -> Result<CubeComplex, KhovanovError> {
        let k = varying.len();
        let mut states: HashMap<u64, Resolution> = HashMap::new();
        let mut vertices: Vec<Vec<(u64, usize)>> = vec![Vec::new(); k + 1];
        let mut q_degrees: Vec<Vec<i64>> = vec![Vec::new(); k + 1];
        for beta in 0..1u64 << k {
            let alpha = base | embed(beta, varying);
            let r = d.resolve(alpha);
            let i = k - beta.count_ones() as usize;
            vertices[i].push((alpha, q_degrees[i].len()));
            q_degrees[i].extend((0..1usize << r.k()).map(|m| q_degree(&r, m)));
            states.insert(alpha, r);
        }
        let mut diffs = Vec::with_capacity(k);
        for i in 1..=k {
            let target: HashMap<u64, usize> = vertices[i - 1].iter().copied().collect();
            let mut columns = Vec::with_capacity(q_degrees[i].len());
            for &(alpha, _) in &vertices[i] {
                let r = &states[&alpha];
                let mut block: Vec<SparseVec> = vec![SparseVec::new(); 1 << r.k()];
                for (pos, &c) in varying.iter().enumerate() {
                    if alpha >> c & 1 == 1 {
                        continue;
                    }
                    let below = varying[..pos].iter().filter(|&&c2| alpha >> c2 & 1 == 1).count();
                    let sign = ring.from_i64(if below % 2 == 0 { 1 } else { -1 });
                    let beta = alpha | 1 << c;
                    let m = edge_map(ring, r, &states[&beta])?;
                    for (col, v) in block.iter_mut().enumerate() {
                        v.axpy(ring, &sign, &m.column(col).shifted(target[&beta]));
                    }
                }
                columns.extend(block);
            }
            diffs.push(ExactMatrix::from_columns(ring, q_degrees[i - 1].len(), columns));
        }
        let dims = q_degrees.iter().map(Vec::len).collect();
        let complex = FreeChainComplex::bounded(ring, dims, diffs)?;
        Ok(CubeComplex { complex, q_degrees, vertices })
    }

    pub fn top(&self) -> usize {
        self.q_degrees.len() - 1
    }

    /// Quantum degrees that occur in the complex.
    pub fn occupied_q_degrees(&self) -> BTreeSet<i64> {
        self.q_degrees.iter().flatten().copied().collect()
    }

    /// Coordinates in degree `i` with quantum degree `j`.
    pub fn q_slice(&self, i: usize, j: i64) -> Vec<usize> {
        self.q_degrees.get(i).map_or(Vec::new(), |qs| (0..qs.len()).filter(|&t| qs[t] == j).collect())
    }

    /// The summand of quantum degree `j`, a complex in degrees `0..=top`.
    pub fn graded_part(&self, j: i64) -> Result<FreeChainComplex, KhovanovError> {
        let top = self.top();
        let slices: Vec<Vec<usize>> = (0..=top).map(|i| self.q_slice(i, j)).collect();
        let diffs = (1..=top)
            .map(|i| self.complex.differential(i).expect("degree in range").select(&slices[i - 1], &slices[i]))
            .collect();
        Ok(FreeChainComplex::bounded(self.complex.ring(), slices.iter().map(Vec::len).collect(), diffs)?)
    }

    /// Bigraded homology `(i, j) -> (rank, torsion)`, nonzero cells only.
    pub fn homology(&self) -> Result<BigradedHomology, KhovanovError> {
        let ring = self.complex.ring();
        let mut cells = BTreeMap::new();
        for j in self.occupied_q_degrees() {
            let h = complex_homology(&self.graded_part(j)?, 0..=self.top())?;
            for d in h.degrees {
                if d.rank > 0 || !d.torsion.is_empty() {
                    cells.insert((d.degree as i64, j), KhCell { rank: d.rank, torsion: d.torsion });
                }
            }
        }
        Ok(BigradedHomology { ring, cells })
    }
}

/// One cell of a bigraded homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KhCell {
    pub rank: usize,
    #[serde(serialize_with = "crate::linalg::serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

/// `(i, j) -> cell`, listing nonzero cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedHomology {
    pub ring: CoeffRing,
    pub cells: BTreeMap<(i64, i64), KhCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigradedCellJson {
    pub i: i64,
    pub j: i64,
    pub rank: usize,
    #[serde(serialize_with = "crate::linalg::serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

impl BigradedHomology {
    pub fn rank(&self, i: i64, j: i64) -> usize {
        self.cells.get(&(i, j)).map_or(0, |c| c.rank)
    }

    pub fn total_rank(&self) -> usize {
        self.cells.values().map(|c| c.rank).sum()
    }

    /// `(i, j) -> rank`, nonzero only.
    pub fn ranks(&self) -> BTreeMap<(i64, i64), usize> {
        self.cells.iter().filter(|(_, c)| c.rank > 0).map(|(&k, c)| (k, c.rank)).collect()
    }

    /// `W[a, b]_{i,j} = W_{i-a, j-b}`.
    pub fn shifted(&self, a: i64, b: i64) -> BigradedHomology {
        BigradedHomology {
            ring: self.ring,
            cells: self.cells.iter().map(|(&(i, j), c)| ((i + a, j + b), c.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> Vec<BigradedCellJson> {
        self.cells
            .iter()
            .map(|(&(i, j), c)| BigradedCellJson { i, j, rank: c.rank, torsion: c.torsion.clone() })
            .collect()
    }
}

/// The Khovanov complex of the whole cube.
pub fn cube_complex(d: &LinkDiagram, ring: CoeffRing) -> Result<CubeComplex, KhovanovError> {
    let all: Vec<usize> = (0..d.crossing_count()).collect();
    CubeComplex::new(d, ring, 0, &all)
}

/// Homology of the cube complex, bigraded by `(i, j)`.
pub fn unnormalised_homology(d: &LinkDiagram, ring: CoeffRing) -> Result<BigradedHomology, KhovanovError> {
    cube_complex(d, ring)?.homology()
}

/// `KH_{i,j} = KH-bar_{i+N_+, j-N_++2N_-}`.
pub fn normalised_homology(d: &LinkDiagram, ring: CoeffRing) -> Result<BigradedHomology, KhovanovError> {
    let (plus, minus) = d.sign_counts().ok_or(KhovanovError::Unoriented)?;
    let (plus, minus) = (plus as i64, minus as i64);
    Ok(unnormalised_homology(d, ring)?.shifted(-plus, plus - 2 * minus))
}

/// Coloured-poset homology of the Khovanov colouring, `(n, j) -> dim`, nonzero cells.
pub fn colouring_homology(d: &LinkDiagram, ring: CoeffRing) -> Result<BTreeMap<(i64, i64), usize>, KhovanovError> {
    let mut out = BTreeMap::new();
    for j in cube_complex(d, ring)?.occupied_q_degrees() {
        let cp = khovanov_colouring_graded(d, ring, j)?;
        for (n, r) in homology(&cp)?.ranks().into_iter().enumerate() {
            if r > 0 {
                out.insert((n as i64, j), r);
            }
        }
    }
    Ok(out)
}

/// The uniform shift `s` with `H_n(B_N, F_D) = KH-bar_{n-s}(D)` in every quantum degree.
pub fn degree_bridge(d: &LinkDiagram, ring: CoeffRing) -> Result<i64, KhovanovError> {
    if !ring.is_field() {
        return Err(KhovanovError::RequiresField);
    }
    let poset_side = colouring_homology(d, ring)?;
    let cube_side = unnormalised_homology(d, ring)?.ranks();
    let n = d.crossing_count() as i64;
    let matches: Vec<i64> = (-n - 1..=n + 1)
        .filter(|&s| {
            let moved: BTreeMap<(i64, i64), usize> = cube_side.iter().map(|(&(i, j), &r)| ((i + s, j), r)).collect();
            moved == poset_side
        })
        .collect();
    match matches.as_slice() {
        [s] => Ok(*s),
        _ => Err(KhovanovError::NoUniformShift),
    }
}
