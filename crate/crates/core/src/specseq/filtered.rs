//! Spectral sequence of a complex filtered by coordinate prefixes.
//!
//! `F_s C_n` is spanned by the first `prefix[n][s]` basis vectors of `C_n`.
//! Pages come from the usual subquotients
//! `E^r_s = Z^r_s / (Z^{r-1}_{s-1} + d Z^{r-1}_{s+r-1})` with
//! `Z^r_s(n) = { x in F_s C_n : dx in F_{s-r} C_{n-1} }`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::linalg::{complex_homology, ExactMatrix, FreeChainComplex, LinalgError, SparseVec, Subquotient};

use super::SpecSeqError;

/// A complex with an increasing filtration by coordinate prefixes.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: FreeChainComplex,
    /// `prefix[n][s] = dim F_s C_n`, nondecreasing in `s`, with `F_s C_n = C_n` once `s >= n`.
    prefix: Vec<Vec<usize>>,
}

impl FilteredComplex {
    pub fn new(complex: FreeChainComplex, prefix: Vec<Vec<usize>>) -> Result<Self, LinalgError> {
        let dims = complex.dims();
        if prefix.len() != dims.len() || prefix.iter().any(|p| p.is_empty()) {
            return Err(LinalgError::Shape("one filtration row per degree".into()));
        }
        let s_len = prefix[0].len();
        for (n, row) in prefix.iter().enumerate() {
            let first_quadrant = row.iter().skip(n).all(|&v| v == dims[n]);
            if row.len() != s_len || row.windows(2).any(|w| w[0] > w[1]) || !first_quadrant {
                return Err(LinalgError::Shape(format!("bad filtration in degree {n}")));
            }
        }
        let c = FilteredComplex { complex, prefix };
        for n in 1..c.prefix.len() {
            let d = c.complex.differential(n).expect("stored degree");
            for s in 0..s_len {
                for j in 0..c.prefix[n][s] {
                    if d.column(j).low().is_some_and(|(i, _)| i >= c.prefix[n - 1][s]) {
                        return Err(LinalgError::Shape(format!("d does not preserve F_{s} in degree {n}")));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn complex(&self) -> &FreeChainComplex {
        &self.complex
    }

    /// Largest filtration index; `F_{s_max}` is everything.
    pub fn s_max(&self) -> usize {
        self.prefix[0].len() - 1
    }

    /// `dim F_s C_n`; zero for negative `s`, everything above `s_max`.
    pub fn filtration_dim(&self, s: i64, n: usize) -> usize {
        if s < 0 {
            0
        } else {
            let row = &self.prefix[n];
            row[(s as usize).min(row.len() - 1)]
        }
    }

    /// Highest degree with valid homology.
    pub fn top(&self) -> usize {
        self.complex.homology_top().expect("complex has a stored differential")
    }

    /// Computes pages `E^0 ..= E^{r_max}` and `E^infinity` in total degrees `0..=top`.
    pub fn spectral_sequence(&self, r_max: usize) -> Result<PageSet, SpecSeqError> {
        let ring = self.complex.ring();
        if !ring.is_field() {
            return Err(SpecSeqError::RequiresField);
        }
        let engine = Engine { c: self, cycles: RefCell::new(HashMap::new()) };
        let top = self.top();
        let s_max = self.s_max();
        let r_inf = s_max + 1;
        let mut pages = Vec::new();
        for r in 0..=r_max.max(r_inf) {
            let page = engine.page(r, top)?;
            if r <= r_max {
                pages.push(page);
            } else if r == r_inf {
                pages.push(page);
            }
        }
        // internal consistency: E^{r+1} is the homology of (E^r, d^r) wherever both sides are in range
        for w in pages.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if b.r != a.r + 1 {
                continue;
            }
            for (&(p, q), &dim) in &b.dims {
                let n = p + q;
                let Some(&here) = a.dims.get(&(p, q)) else { continue };
                let out = a.differentials.get(&(p, q)).map_or(0, ExactMatrix::rank);
                let into = match (p + a.r, (q + 1).checked_sub(a.r)) {
                    (pp, Some(qq)) if n < top => a.differentials.get(&(pp, qq)).map_or(0, ExactMatrix::rank),
                    _ => continue,
                };
                if here - out - into != dim {
                    return Err(SpecSeqError::Inconsistent { r: a.r, p, q });
                }
            }
            for (&(p, q), d) in &a.differentials {
                if let Some(q2) = (q + a.r).checked_sub(1) {
                    if let Some(next) = p.checked_sub(a.r).and_then(|p2| a.differentials.get(&(p2, q2))) {
                        if !next.mul(d)?.is_zero() {
                            return Err(SpecSeqError::Inconsistent { r: a.r, p, q });
                        }
                    }
                }
            }
        }
        let einf = pages.last().expect("at least one page").dims.clone();
        let homology = complex_homology(&self.complex, 0..=top)?.ranks();
        let abutment: Vec<usize> =
            (0..=top).map(|n| einf.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum()).collect();
        let converges = abutment == homology;
        if pages.last().is_some_and(|p| p.r > r_max) {
            pages.pop();
        }
        Ok(PageSet { pages, einf, window: top, homology, converges })
    }
}

struct Engine<'a> {
    c: &'a FilteredComplex,
    cycles: RefCell<HashMap<(usize, usize, usize), Rc<Vec<SparseVec>>>>,
}

impl Engine<'_> {
    /// A basis of `Z^r_s(n)`.
    fn z(&self, r: i64, s: i64, n: usize) -> Result<Rc<Vec<SparseVec>>, SpecSeqError> {
        let c = self.c;
        let cols = c.filtration_dim(s, n);
        // `Z^r_s(n)` only depends on the two prefix lengths involved
        let lo = if r <= 0 || n == 0 { usize::MAX } else { c.filtration_dim(s - r, n - 1) };
        if let Some(v) = self.cycles.borrow().get(&(cols, lo, n)) {
            return Ok(v.clone());
        }
        let v: Vec<SparseVec> = if lo == usize::MAX {
            (0..cols).map(SparseVec::unit).collect()
        } else {
            let d = c.complex.differential(n).expect("degree in range");
            let rows: Vec<usize> = (lo..d.rows()).collect();
            let cols: Vec<usize> = (0..cols).collect();
            d.select(&rows, &cols).kernel_basis()?.into_columns()
        };
        let v = Rc::new(v);
        self.cycles.borrow_mut().insert((cols, lo, n), v.clone());
        Ok(v)
    }

    fn subquotient(&self, r: i64, s: i64, n: usize) -> Result<Subquotient, SpecSeqError> {
        let mut denominator: Vec<SparseVec> = self.z(r - 1, s - 1, n)?.as_ref().clone();
        if let Some(d) = self.c.complex.differential(n + 1) {
            denominator.extend(self.z(r - 1, s + r - 1, n + 1)?.iter().map(|v| d.apply(v)));
        }
        let numerator = self.z(r, s, n)?;
        Ok(Subquotient::new(self.c.complex.ring(), denominator, numerator.iter().cloned())?)
    }

    fn page(&self, r: usize, top: usize) -> Result<Page, SpecSeqError> {
        let ring = self.c.complex.ring();
        let ri = r as i64;
        let mut quotients: BTreeMap<(usize, usize), Subquotient> = BTreeMap::new();
        for n in 0..=top {
            for p in 0..=n.min(self.c.s_max()) {
                quotients.insert((p, n - p), self.subquotient(ri, p as i64, n)?);
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(p, q), e) in &quotients {
            let n = p + q;
            if n == 0 || e.dim() == 0 {
                continue;
            }
            let (Some(p2), Some(q2)) = (p.checked_sub(r), (q + r).checked_sub(1)) else { continue };
            let target = &quotients[&(p2, q2)];
            if target.dim() == 0 {
                continue;
            }
            let d = self.c.complex.differential(n).expect("degree in range");
            let columns = e
                .representatives()
                .iter()
                .map(|x| target.coordinates(&d.apply(x)))
                .collect::<Result<Vec<_>, _>>()?;
            let m = ExactMatrix::from_columns(ring, target.dim(), columns);
            if !m.is_zero() {
                differentials.insert((p, q), m);
            }
        }
        let dims = quotients.iter().map(|(&k, e)| (k, e.dim())).collect();
        Ok(Page { r, dims, differentials })
    }
}

/// One page: `dims[(p, q)]` and nonzero `d^r : E^r_{p,q} -> E^r_{p-r, q+r-1}`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub dims: BTreeMap<(usize, usize), usize>,
    pub differentials: BTreeMap<(usize, usize), ExactMatrix>,
}

impl Page {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    /// `{"r":2,"cells":[{"p":1,"q":0,"dim":2},..]}`, listing nonzero cells.
    pub fn to_json(&self) -> PageJson {
        PageJson { r: self.r, cells: cells(&self.dims) }
    }
}

fn cells(dims: &BTreeMap<(usize, usize), usize>) -> Vec<CellJson> {
    dims.iter().filter(|(_, &d)| d > 0).map(|(&(p, q), &dim)| CellJson { p, q, dim }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellJson {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageJson {
    pub r: usize,
    pub cells: Vec<CellJson>,
}

/// Pages in total degrees `0..=window`, the stable page and the homology it abuts to.
#[derive(Clone, Debug)]
pub struct PageSet {
    pub pages: Vec<Page>,
    pub einf: BTreeMap<(usize, usize), usize>,
    pub window: usize,
    /// `dim H_n` of the filtered complex for `n <= window`.
    pub homology: Vec<usize>,
    /// Whether `sum_{p+q=n} dim E^inf_{p,q} = dim H_n` for every `n` in the window.
    pub converges: bool,
}

impl PageSet {
    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    pub fn einf_total(&self, n: usize) -> usize {
        self.einf.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum()
    }

    /// The first `r` from which all listed pages agree with `E^inf`.
    pub fn collapse_page(&self) -> Option<usize> {
        let mut r = None;
        for p in self.pages.iter().rev() {
            if p.dims == self.einf {
                r = Some(p.r);
            } else {
                break;
            }
        }
        r
    }

    pub fn to_json(&self) -> PageSetJson {
        PageSetJson {
            pages: self.pages.iter().map(Page::to_json).collect(),
            einf: cells(&self.einf),
            window: self.window,
            homology: self.homology.clone(),
            converges: self.converges,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageSetJson {
    pub pages: Vec<PageJson>,
    pub einf: Vec<CellJson>,
    pub window: usize,
    pub homology: Vec<usize>,
    pub converges: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CoeffRing;

    /// `d b = u` with `u` in `F_0 C_0` and `b` only in `F_1 C_1`.
    fn staircase() -> FilteredComplex {
        let q = CoeffRing::Rationals;
        let d1 = ExactMatrix::from_rows(q, &[vec![1]], 1).unwrap();
        let d2 = ExactMatrix::zeros(q, 1, 0);
        let c = FreeChainComplex::truncated(q, vec![1, 1, 0], vec![d1, d2]).unwrap();
        FilteredComplex::new(c, vec![vec![1, 1], vec![0, 1], vec![0, 0]]).unwrap()
    }

    #[test]
    fn differential_of_length_one() {
        let ss = staircase().spectral_sequence(3).unwrap();
        let e0 = ss.page(0).unwrap();
        assert_eq!(e0.dim(0, 0), 1);
        assert_eq!(e0.dim(1, 0), 1);
        assert!(e0.differentials.is_empty());
        let e1 = ss.page(1).unwrap();
        assert_eq!(e1.differentials.keys().collect::<Vec<_>>(), vec![&(1, 0)]);
        assert!(ss.einf.values().all(|&d| d == 0));
        assert!(ss.converges);
        assert_eq!(ss.collapse_page(), Some(2));
    }

    #[test]
    fn filtration_must_be_preserved() {
        let q = CoeffRing::Rationals;
        let d1 = ExactMatrix::from_rows(q, &[vec![0], vec![1]], 1).unwrap();
        let c = FreeChainComplex::truncated(q, vec![2, 1], vec![d1]).unwrap();
        assert!(FilteredComplex::new(c, vec![vec![1, 2], vec![1, 1]]).is_err());
    }
}
