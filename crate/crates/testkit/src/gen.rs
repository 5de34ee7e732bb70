//! Random coloured posets and bundles.
//!
//! Colourings are direct sums of interval modules (a basis vector lives on a
//! convex set of elements) conjugated by random invertible changes of basis,
//! so functoriality holds by construction. The core constructors still check
//! it on every output.

use std::collections::HashMap;
use std::hash::Hasher;

use colposet::bundle::Bundle;
use colposet::coloured::{ColouredPoset, ColouredPosetMorphism};
use colposet::linalg::{CoeffRing, ExactMatrix};
use colposet::poset::Poset;
use fnv::FnvHasher;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Which base poset a bundle is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseSelector {
    Boolean(usize),
    Dihedral(usize),
    Symmetric(usize),
    Chain(usize),
}

impl BaseSelector {
    pub fn poset(&self) -> Poset {
        match *self {
            BaseSelector::Boolean(n) => Poset::boolean(n),
            BaseSelector::Dihedral(m) => Poset::bruhat_dihedral(m),
            BaseSelector::Symmetric(n) => Poset::bruhat_symmetric(n),
            BaseSelector::Chain(n) => Poset::chain(n),
        }
    }

    pub fn name(&self) -> String {
        match self {
            BaseSelector::Boolean(n) => format!("boolean({n})"),
            BaseSelector::Dihedral(m) => format!("bruhat_dihedral({m})"),
            BaseSelector::Symmetric(n) => format!("bruhat_symmetric({n})"),
            BaseSelector::Chain(n) => format!("chain({n})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub seed: u64,
    pub max_fibre_size: usize,
    pub max_dim: usize,
    #[serde(serialize_with = "ring_name")]
    pub ring: CoeffRing,
}

fn ring_name<S: serde::Serializer>(r: &CoeffRing, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("all bounds must be at least 1")]
    Bounds,
    #[error("no valid structure after {tries} tries at `{path}`")]
    Exhausted { path: String, tries: usize },
}

const RETRIES: usize = 16;

impl GenParams {
    pub fn new(seed: u64, max_fibre_size: usize, max_dim: usize, ring: CoeffRing) -> Result<GenParams, GenError> {
        if max_fibre_size == 0 || max_dim == 0 {
            return Err(GenError::Bounds);
        }
        Ok(GenParams { seed, max_fibre_size, max_dim, ring })
    }

    /// A generator keyed by `(seed, path)`: the same pair always gives the same stream.
    pub fn rng(&self, path: &str) -> ChaCha8Rng {
        let mut h = FnvHasher::default();
        h.write(path.as_bytes());
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&h.finish().to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}

/// A random poset with a top on `2..=max` elements, labelled `y1, y2, ..` and `top`.
pub fn random_poset(rng: &mut impl Rng, max: usize) -> Poset {
    let n = rng.gen_range(1..=max.max(1));
    let mut labels: Vec<String> = (1..n).map(|i| format!("y{i}")).collect();
    labels.push("top".into());
    let mut relations = Vec::new();
    for i in 0..n - 1 {
        for j in i + 1..n - 1 {
            if rng.gen_bool(0.35) {
                relations.push((labels[i].clone(), labels[j].clone()));
            }
        }
        relations.push((labels[i].clone(), "top".to_string()));
    }
    Poset::build(labels, &relations).expect("relations follow index order and end at the top")
}

/// The convex hull of a random set of one to three elements.
fn random_convex(rng: &mut impl Rng, p: &Poset) -> Vec<bool> {
    let k = rng.gen_range(1..=3.min(p.len()));
    let picks: Vec<usize> = (0..p.len()).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
    (0..p.len()).map(|y| picks.iter().any(|&a| p.leq(a, y)) && picks.iter().any(|&b| p.leq(y, b))).collect()
}

/// A random invertible integer matrix with its inverse, as a product of shears and swaps.
fn random_unimodular(rng: &mut impl Rng, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let identity = |n: usize| (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>();
    let (mut g, mut inv) = (identity(n), identity(n));
    if n < 2 {
        return (g, inv);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        if rng.gen_bool(0.25) {
            // g <- S g and inv <- inv S
            g.swap(i, j);
            for row in inv.iter_mut() {
                row.swap(i, j);
            }
        } else {
            let c = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
            // row_j += c row_i on g; column_i -= c column_j on the inverse
            for col in 0..n {
                let v = g[i][col];
                g[j][col] += c * v;
            }
            for row in inv.iter_mut() {
                let v = row[j];
                row[i] -= c * v;
            }
        }
    }
    (g, inv)
}

fn matrix(ring: CoeffRing, rows: &[Vec<i64>], cols: usize) -> ExactMatrix {
    ExactMatrix::from_rows(ring, rows, cols).expect("rows have the stated length")
}

/// A random functor on `p`: interval modules with supports given by `intervals`.
fn interval_colouring(rng: &mut impl Rng, p: &Poset, ring: CoeffRing, intervals: &[Vec<bool>]) -> ColouredPoset {
    let n = p.len();
    let members: Vec<Vec<usize>> = (0..n).map(|y| (0..intervals.len()).filter(|&i| intervals[i][y]).collect()).collect();
    let bases: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = members.iter().map(|m| random_unimodular(rng, m.len())).collect();
    let mut covers = HashMap::new();
    for (x, y) in p.covers() {
        let (dx, dy) = (members[x].len(), members[y].len());
        let proj: Vec<Vec<i64>> = members[y]
            .iter()
            .map(|i| members[x].iter().map(|j| i64::from(i == j)).collect())
            .collect();
        let m = matrix(ring, &bases[y].0, dy)
            .mul(&matrix(ring, &proj, dx))
            .and_then(|m| m.mul(&matrix(ring, &bases[x].1, dx)))
            .expect("shapes agree");
        covers.insert((x, y), m);
    }
    let dims = members.iter().map(Vec::len).collect();
    ColouredPoset::new(p.clone(), ring, dims, covers).expect("interval modules are functorial")
}

fn random_intervals(rng: &mut impl Rng, p: &Poset, max_dim: usize) -> Vec<Vec<bool>> {
    let mut load = vec![0usize; p.len()];
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=2 * max_dim) {
        let s = random_convex(rng, p);
        if s.iter().zip(&load).all(|(&inside, &l)| !inside || l < max_dim) {
            for (l, &inside) in load.iter_mut().zip(&s) {
                *l += usize::from(inside);
            }
            out.push(s);
        }
    }
    out
}

/// A random coloured poset on at most `max_fibre_size` elements with modules of rank at most `max_dim`.
pub fn random_coloured_poset(params: &GenParams, path: &str) -> Result<ColouredPoset, GenError> {
    let mut rng = params.rng(path);
    let p = random_poset(&mut rng, params.max_fibre_size);
    random_colouring_on(params, &p, path)
}

/// A random colouring of a given poset.
pub fn random_colouring_on(params: &GenParams, p: &Poset, path: &str) -> Result<ColouredPoset, GenError> {
    let mut rng = params.rng(&format!("{path}/colouring"));
    let intervals = random_intervals(&mut rng, p, params.max_dim);
    Ok(interval_colouring(&mut rng, p, params.ring, &intervals))
}

/// A random bundle over `base`.
///
/// A fibre poset `P` is drawn and each non-top `y` gets a random birth point
/// `s_y` in the base; the fibre over `b` is `{y | s_y <= b}` plus the top, and
/// fibre morphisms are the inclusions. The colouring is the restriction of a
/// random colouring of `base x P`, so `tau` is natural and functorial.
pub fn random_bundle(params: &GenParams, base: &Poset, path: &str) -> Result<Bundle, GenError> {
    for attempt in 0..RETRIES {
        let key = format!("{path}#{attempt}");
        let mut rng = params.rng(&key);
        let p = random_poset(&mut rng, params.max_fibre_size);
        let m = p.len();
        let birth: Vec<usize> = (0..m)
            .map(|y| match (y == p.top(), base.bottom()) {
                (true, _) => base.bottom().unwrap_or(0),
                (false, Some(b)) if rng.gen_bool(0.5) => b,
                _ => rng.gen_range(0..base.len()),
            })
            .collect();
        let product = base.product(&p);
        // with no bottom, the top of the fibre exists everywhere anyway
        let present = |b: usize, y: usize| y == p.top() || base.leq(birth[y], b);
        let intervals = random_intervals(&mut rng, &product, params.max_dim);
        let g = interval_colouring(&mut rng, &product, params.ring, &intervals);
        let kept: Vec<Vec<usize>> = (0..base.len()).map(|b| (0..m).filter(|&y| present(b, y)).collect()).collect();
        let mut fibres = Vec::with_capacity(base.len());
        for (b, ys) in kept.iter().enumerate() {
            let q = p.induced(ys).expect("the top is kept");
            let covers = q
                .covers()
                .map(|(i, j)| ((i, j), g.map(b * m + ys[i], b * m + ys[j]).clone()))
                .collect();
            let dims = ys.iter().map(|&y| g.dim(b * m + y)).collect();
            fibres.push(ColouredPoset::new(q, params.ring, dims, covers).expect("restriction of a functor"));
        }
        let mut morphisms = HashMap::new();
        for (x, z) in base.covers() {
            let f = kept[x].iter().map(|y| kept[z].binary_search(y).expect("fibres grow")).collect();
            let tau = kept[x].iter().map(|&y| g.map(x * m + y, z * m + y).clone()).collect();
            morphisms.insert((x, z), ColouredPosetMorphism { f, tau });
        }
        if let Ok(xi) = Bundle::new(base.clone(), fibres, morphisms) {
            return Ok(xi);
        }
    }
    Err(GenError::Exhausted { path: path.into(), tries: RETRIES })
}
