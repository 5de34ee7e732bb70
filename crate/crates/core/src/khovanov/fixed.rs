//! Khovanov homology relative to a set of fixed crossings.
//!
//! The free crossings index a cube whose vertex `x` carries
//! `V(x) = KH-bar(D_x)[0, rk x]`, where `D_x` resolves the free crossings by `x`
//! and keeps the fixed ones. Saddle maps between neighbouring `D_x` induce the
//! edge maps on homology.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bundle::boolean_decompose;
use crate::linalg::{CoeffRing, ExactMatrix, FreeChainComplex, HomologyBasis, SparseVec};
use crate::specseq::{spectral_sequence, Bicomplex, PageSet};

use super::cube::{degree_bridge, edge_map, khovanov_colouring_graded, unnormalised_homology, CubeComplex};
use super::diagram::LinkDiagram;
use super::KhovanovError;

fn embed(x: u64, positions: &[usize]) -> u64 {
    positions.iter().enumerate().filter(|(b, _)| x >> b & 1 == 1).fold(0, |acc, (_, &c)| acc | 1 << c)
}

fn free_crossings(d: &LinkDiagram, fixed: &[usize]) -> Result<(Vec<usize>, Vec<usize>), KhovanovError> {
    let n = d.crossing_count();
    let mut fixed = fixed.to_vec();
    fixed.sort_unstable();
    fixed.dedup();
    if let Some(&c) = fixed.iter().find(|&&c| c >= n) {
        return Err(KhovanovError::UnknownCrossing(c));
    }
    let free = (0..n).filter(|c| !fixed.contains(c)).collect();
    Ok((fixed, free))
}

/// Homology of the sub-cube over one vertex `x` of the free cube, per `(h, j)`.
struct VertexHomology {
    cube: CubeComplex,
    /// `(h, j) -> (coordinates of the q-slice in degree h, homology basis)`
    parts: BTreeMap<(usize, i64), (Vec<usize>, HomologyBasis)>,
}

impl VertexHomology {
    fn new(d: &LinkDiagram, ring: CoeffRing, base: u64, fixed: &[usize]) -> Result<Self, KhovanovError> {
        let cube = CubeComplex::new(d, ring, base, fixed)?;
        let top = cube.top();
        let mut parts = BTreeMap::new();
        for j in cube.occupied_q_degrees() {
            for h in 0..=top {
                let here = cube.q_slice(h, j);
                if here.is_empty() {
                    continue;
                }
                let d_out = match h {
                    0 => ExactMatrix::zeros(ring, 0, here.len()),
                    _ => cube.complex.differential(h).expect("degree in range").select(&cube.q_slice(h - 1, j), &here),
                };
                let d_in = match cube.complex.differential(h + 1) {
                    Some(m) if h < top => m.select(&here, &cube.q_slice(h + 1, j)),
                    _ => ExactMatrix::zeros(ring, here.len(), 0),
                };
                let basis = HomologyBasis::from_differentials(&d_out, &d_in)?;
                if basis.dim() > 0 {
                    parts.insert((h, j), (here, basis));
                }
            }
        }
        Ok(VertexHomology { cube, parts })
    }

    fn dim(&self, h: usize, j: i64) -> usize {
        self.parts.get(&(h, j)).map_or(0, |(_, b)| b.dim())
    }
}

/// The saddle chain map `C(D_x) -> C(D_x')` in degree `h`, for `x' = x + {c}`.
fn saddle(
    d: &LinkDiagram,
    ring: CoeffRing,
    from: &CubeComplex,
    to: &CubeComplex,
    c: usize,
    h: usize,
) -> Result<ExactMatrix, KhovanovError> {
    let target: BTreeMap<u64, usize> = to.vertices[h].iter().copied().collect();
    let mut columns = Vec::new();
    for &(alpha, _) in &from.vertices[h] {
        let beta = alpha | 1 << c;
        let m = edge_map(ring, &d.resolve(alpha), &d.resolve(beta))?;
        columns.extend(m.columns().iter().map(|v| v.shifted(target[&beta])));
    }
    Ok(ExactMatrix::from_columns(ring, to.q_degrees[h].len(), columns))
}

fn restrict(ring: CoeffRing, v: &SparseVec, coords: &[usize]) -> SparseVec {
    let entries = v.iter().filter_map(|(i, c)| coords.binary_search(i).ok().map(|k| (k, c.clone()))).collect();
    SparseVec::from_entries(ring, entries)
}

fn embed_vec(ring: CoeffRing, v: &SparseVec, coords: &[usize]) -> SparseVec {
    SparseVec::from_entries(ring, v.iter().map(|(k, c)| (coords[*k], c.clone())).collect())
}

/// The tri-graded complex `K-bar_{p,h,j}(D; fixed)`: for each `(h, j)` a complex in
/// `p = l - rk(x)` with differential of degree `(-1, 0, 0)`.
#[derive(Clone, Debug)]
pub struct TriGradedComplex {
    pub fixed: Vec<usize>,
    pub free: Vec<usize>,
    pub rows: BTreeMap<(usize, i64), FreeChainComplex>,
}

impl TriGradedComplex {
    /// `(p, h, j) -> dim`, nonzero only.
    pub fn dims(&self) -> BTreeMap<(usize, usize, i64), usize> {
        let mut out = BTreeMap::new();
        for (&(h, j), c) in &self.rows {
            for (p, &dim) in c.dims().iter().enumerate() {
                if dim > 0 {
                    out.insert((p, h, j), dim);
                }
            }
        }
        out
    }

    /// `(p, h, j) -> dim KH-bar_{p,h,j}(D; fixed)`, nonzero only.
    pub fn homology(&self) -> Result<BTreeMap<(usize, usize, i64), usize>, KhovanovError> {
        let mut out = BTreeMap::new();
        for (&(h, j), c) in &self.rows {
            let top = c.homology_top().expect("bounded");
            for (p, r) in crate::linalg::complex_homology(c, 0..=top)?.ranks().into_iter().enumerate() {
                if r > 0 {
                    out.insert((p, h, j), r);
                }
            }
        }
        Ok(out)
    }
}

/// Builds `K-bar(D; fixed)`; crossings are 0-based indices.
pub fn fixed_crossing_complex(d: &LinkDiagram, fixed: &[usize], ring: CoeffRing) -> Result<TriGradedComplex, KhovanovError> {
    if !ring.is_field() {
        return Err(KhovanovError::RequiresField);
    }
    let (fixed, free) = free_crossings(d, fixed)?;
    let l = free.len();
    let vertices: Vec<VertexHomology> =
        (0..1u64 << l).map(|x| VertexHomology::new(d, ring, embed(x, &free), &fixed)).collect::<Result<_, _>>()?;
    let keys: std::collections::BTreeSet<(usize, i64)> = vertices.iter().flat_map(|v| v.parts.keys().copied()).collect();
    // saddle chain maps per cover and degree, shared by all quantum degrees
    let mut saddles: BTreeMap<(u64, usize, usize), ExactMatrix> = BTreeMap::new();
    for x in 0..1u64 << l {
        for (pos, &c) in free.iter().enumerate() {
            if x >> pos & 1 == 0 {
                for h in 0..=fixed.len() {
                    let m = saddle(d, ring, &vertices[x as usize].cube, &vertices[(x | 1 << pos) as usize].cube, c, h)?;
                    saddles.insert((x, pos, h), m);
                }
            }
        }
    }
    let by_rank = |p: usize| -> Vec<u64> { (0..1u64 << l).filter(|x| x.count_ones() as usize == l - p).collect() };
    let mut rows = BTreeMap::new();
    for (h, j) in keys {
        let offsets: Vec<BTreeMap<u64, usize>> = (0..=l)
            .map(|p| {
                let mut off = 0;
                by_rank(p)
                    .into_iter()
                    .map(|x| {
                        let o = off;
                        off += vertices[x as usize].dim(h, j);
                        (x, o)
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> =
            (0..=l).map(|p| by_rank(p).iter().map(|&x| vertices[x as usize].dim(h, j)).sum()).collect();
        let mut diffs = Vec::with_capacity(l);
        for p in 1..=l {
            let mut columns = Vec::with_capacity(dims[p]);
            for x in by_rank(p) {
                let src = &vertices[x as usize];
                let Some((src_coords, src_basis)) = src.parts.get(&(h, j)) else { continue };
                let mut block = vec![SparseVec::new(); src_basis.dim()];
                for pos in (0..l).filter(|&pos| x >> pos & 1 == 0) {
                    let y = x | 1 << pos;
                    let dst = &vertices[y as usize];
                    let Some((dst_coords, dst_basis)) = dst.parts.get(&(h, j)) else { continue };
                    let below = (0..pos).filter(|&b| x >> b & 1 == 1).count();
                    let sign = ring.from_i64(if below % 2 == 0 { 1 } else { -1 });
                    let m = &saddles[&(x, pos, h)];
                    for (t, rep) in src_basis.representatives().iter().enumerate() {
                        let image = restrict(ring, &m.apply(&embed_vec(ring, rep, src_coords)), dst_coords);
                        let coords = dst_basis.coordinates(&image)?;
                        block[t].axpy(ring, &sign, &coords.shifted(offsets[p - 1][&y]));
                    }
                }
                columns.extend(block);
            }
            diffs.push(ExactMatrix::from_columns(ring, dims[p - 1], columns));
        }
        rows.insert((h, j), FreeChainComplex::bounded(ring, dims, diffs)?);
    }
    Ok(TriGradedComplex { fixed, free, rows })
}

/// `KH-bar_{p,h,j}(D; fixed)` as `(p, h, j) -> dim`.
pub fn fixed_crossing_homology(
    d: &LinkDiagram,
    fixed: &[usize],
    ring: CoeffRing,
) -> Result<BTreeMap<(usize, usize, i64), usize>, KhovanovError> {
    fixed_crossing_complex(d, fixed, ring)?.homology()
}

/// The spectral sequence of the bundle over the free cube in quantum degree `i`.
#[derive(Clone, Debug)]
pub struct FixedCrossingReport {
    pub fixed: Vec<usize>,
    pub q_degree: i64,
    pub bridge: i64,
    pub pages: PageSet,
    /// `KH-bar_{p-s, q-s, i}(D; fixed)` at each `(p, q)` in the window.
    pub e2_expected: BTreeMap<(usize, usize), usize>,
    pub e2_matches: bool,
    /// `dim KH-bar_{n-s, i}(D)` for `n` in the window.
    pub khovanov: Vec<usize>,
    pub converges: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedCrossingReportJson {
    pub fixed: Vec<usize>,
    pub q_degree: i64,
    pub bridge: i64,
    pub pages: crate::specseq::PageSetJson,
    pub e2_matches: bool,
    pub khovanov: Vec<usize>,
    pub converges: bool,
}

impl FixedCrossingReport {
    pub fn to_json(&self) -> FixedCrossingReportJson {
        FixedCrossingReportJson {
            fixed: self.fixed.clone(),
            q_degree: self.q_degree,
            bridge: self.bridge,
            pages: self.pages.to_json(),
            e2_matches: self.e2_matches,
            khovanov: self.khovanov.clone(),
            converges: self.converges,
        }
    }
}

/// Runs the spectral sequence of the Khovanov colouring in quantum degree `i`,
/// split as a bundle over the free crossings, and compares it with the
/// fixed-crossing homology and with `KH-bar(D)`.
pub fn fixed_crossing_spectral_sequence(
    d: &LinkDiagram,
    fixed: &[usize],
    i: i64,
    ring: CoeffRing,
) -> Result<FixedCrossingReport, KhovanovError> {
    let bridge = degree_bridge(d, ring)?;
    let (fixed, free) = free_crossings(d, fixed)?;
    let fixed_h = fixed_crossing_homology(d, &fixed, ring)?;
    let kh = unnormalised_homology(d, ring)?;
    fixed_crossing_spectral_sequence_with(d, &fixed, &free, i, ring, bridge, &fixed_h, &kh.ranks())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn fixed_crossing_spectral_sequence_with(
    d: &LinkDiagram,
    fixed: &[usize],
    free: &[usize],
    i: i64,
    ring: CoeffRing,
    bridge: i64,
    fixed_h: &BTreeMap<(usize, usize, i64), usize>,
    kh: &BTreeMap<(i64, i64), usize>,
) -> Result<FixedCrossingReport, KhovanovError> {
    let n = d.crossing_count();
    let cp = khovanov_colouring_graded(d, ring, i)?;
    let labels: Vec<String> = fixed.iter().map(|c| (c + 1).to_string()).collect();
    let xi = boolean_decompose(&cp, &labels)?;
    let n_max = n + 1;
    let k = Bicomplex::new(&xi, n_max, false)?;
    let pages = spectral_sequence(&k, n_max, free.len() + 2)?;
    let window = pages.window;
    let look = |p: i64, q: i64| -> usize {
        if p < 0 || q < 0 {
            0
        } else {
            fixed_h.get(&(p as usize, q as usize, i)).copied().unwrap_or(0)
        }
    };
    let mut e2_expected = BTreeMap::new();
    for total in 0..=window {
        for p in 0..=total {
            let q = total - p;
            e2_expected.insert((p, q), look(p as i64 - bridge, q as i64 - bridge));
        }
    }
    let e2 = pages.page(2).ok_or(KhovanovError::MissingPage(2))?;
    let e2_matches = e2_expected.iter().all(|(&(p, q), &dim)| e2.dim(p, q) == dim);
    let khovanov: Vec<usize> = (0..=window).map(|t| kh.get(&(t as i64 - bridge, i)).copied().unwrap_or(0)).collect();
    let converges = (0..=window).all(|t| pages.einf_total(t) == khovanov[t]) && pages.converges;
    Ok(FixedCrossingReport { fixed: fixed.to_vec(), q_degree: i, bridge, pages, e2_expected, e2_matches, khovanov, converges })
}

/// Runs [`fixed_crossing_spectral_sequence`] for every occupied quantum degree.
pub fn fixed_crossing_spectral_sequences(
    d: &LinkDiagram,
    fixed: &[usize],
    ring: CoeffRing,
) -> Result<Vec<FixedCrossingReport>, KhovanovError> {
    let bridge = degree_bridge(d, ring)?;
    let (fixed, free) = free_crossings(d, fixed)?;
    let fixed_h = fixed_crossing_homology(d, &fixed, ring)?;
    let kh = unnormalised_homology(d, ring)?.ranks();
    let cube = super::cube::cube_complex(d, ring)?;
    cube.occupied_q_degrees()
        .into_iter()
        .map(|i| fixed_crossing_spectral_sequence_with(d, &fixed, &free, i, ring, bridge, &fixed_h, &kh))
        .collect()
}

/// `V(x)` for each vertex of the free cube, `(h, j) -> dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreModule {
    pub vertex: u64,
    pub cells: BTreeMap<(i64, i64), usize>,
}

/// Computes each `V(x)` from the partially resolved diagram `D_x`.
///
/// With `normalised`, `D_x` is given an orientation, its normalised homology is
/// computed and shifted by `[n_+, 2n_- - n_+ + rk x]`; otherwise the
/// unnormalised homology is shifted by `[0, rk x]`. Both give the same modules.
pub fn fibre_modules(
    d: &LinkDiagram,
    fixed: &[usize],
    ring: CoeffRing,
    normalised: bool,
) -> Result<Vec<FibreModule>, KhovanovError> {
    let (_, free) = free_crossings(d, fixed)?;
    (0..1u64 << free.len())
        .map(|x| {
            let mut dx = d.partial_resolution(&free, embed(x, &free));
            let rk = x.count_ones() as i64;
            let h = if normalised {
                dx.orient(false, &[])?;
                let (np, nm) = dx.sign_counts().expect("just oriented");
                let (np, nm) = (np as i64, nm as i64);
                super::cube::normalised_homology(&dx, ring)?.shifted(np, 2 * nm - np + rk)
            } else {
                unnormalised_homology(&dx, ring)?.shifted(0, rk)
            };
            Ok(FibreModule { vertex: x, cells: h.ranks() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::khovanov::parse_pd;

    const TREFOIL: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";
    const KINKED: &str = "PD[X[1,4,2,5],X[3,8,4,1],X[5,2,6,3],X[6,8,7,7]]";

    fn q() -> CoeffRing {
        CoeffRing::Rationals
    }

    fn as_bigraded(t: &BTreeMap<(usize, usize, i64), usize>, f: impl Fn(usize, usize) -> i64) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&(p, h, j), &r) in t {
            *out.entry((f(p, h), j)).or_default() += r;
        }
        out
    }

    #[test]
    fn extremes_recover_the_cube() {
        let d = parse_pd(TREFOIL).unwrap();
        let kh = unnormalised_homology(&d, q()).unwrap().ranks();
        let none = fixed_crossing_homology(&d, &[], q()).unwrap();
        assert!(none.keys().all(|&(_, h, _)| h == 0));
        assert_eq!(as_bigraded(&none, |p, _| p as i64), kh);
        let all = fixed_crossing_complex(&d, &[0, 1, 2], q()).unwrap();
        assert!(all.rows.values().all(|c| c.dims().len() == 2 && c.dims()[1] == 0));
        assert_eq!(as_bigraded(&all.homology().unwrap(), |_, h| h as i64), kh);
    }

    #[test]
    fn fibre_routes_agree() {
        let d = parse_pd(KINKED).unwrap();
        for fixed in [vec![3], vec![0, 2]] {
            let a = fibre_modules(&d, &fixed, q(), false).unwrap();
            let b = fibre_modules(&d, &fixed, q(), true).unwrap();
            assert_eq!(a, b);
            let t = fixed_crossing_complex(&d, &fixed, q()).unwrap();
            let l = t.free.len();
            for m in &a {
                let p = l - m.vertex.count_ones() as usize;
                for (&(h, j), &r) in &m.cells {
                    let direct = &t.rows[&(h as usize, j)];
                    let offset_dims: usize = (0..1u64 << l)
                        .filter(|x| x.count_ones() == m.vertex.count_ones())
                        .map(|x| a[x as usize].cells.get(&(h, j)).copied().unwrap_or(0))
                        .sum();
                    assert_eq!(direct.dim(p), offset_dims);
                    assert!(r > 0);
                }
            }
        }
    }

    #[test]
    fn reordering_crossings_keeps_dimensions() {
        let d = parse_pd(TREFOIL).unwrap();
        let base = fixed_crossing_homology(&d, &[0], q()).unwrap();
        // move crossing 0 to the end and the free ones around it
        let e = d.reordered(&[2, 1, 0]);
        assert_eq!(fixed_crossing_homology(&e, &[2], q()).unwrap(), base);
    }

    #[test]
    fn trefoil_one_fixed_crossing_converges() {
        let d = parse_pd(TREFOIL).unwrap();
        for ring in [q(), CoeffRing::prime(2).unwrap()] {
            for r in fixed_crossing_spectral_sequences(&d, &[1], ring).unwrap() {
                assert!(r.e2_matches, "{ring} i={}: {:?} vs {:?}", r.q_degree, r.pages.page(2), r.e2_expected);
                assert!(r.converges, "{ring} i={}", r.q_degree);
            }
        }
    }

    #[test]
    fn kink_fixed_collapses_in_row_one() {
        let d = parse_pd(KINKED).unwrap();
        for r in fixed_crossing_spectral_sequences(&d, &[3], q()).unwrap() {
            let e2 = r.pages.page(2).unwrap();
            assert!(e2.dims.iter().all(|(&(_, q), &dim)| dim == 0 || q == 1), "{:?}", e2.dims);
            assert_eq!(r.pages.collapse_page().map(|c| c <= 2), Some(true));
            assert!(r.converges && r.e2_matches);
        }
    }
}
