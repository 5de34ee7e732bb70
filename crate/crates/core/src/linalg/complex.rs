//! Bounded and truncated chain complexes of free modules, and their homology.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::snf::smith_normal_form;
use super::{CoeffRing, ExactMatrix, LinalgError, SparseVec, Subquotient};

/// A chain complex `C_0 <- C_1 <- ... <- C_top` of finitely generated free modules.
///
/// A bounded complex is zero above `top`. A truncated one is an initial
/// segment of a longer complex, so homology is only determined up to
/// `top - 1`. Internally a bounded complex carries one extra zero module,
/// which makes both cases look alike: homology is known for degrees
/// `0..=len-2`.
#[derive(Clone, Debug)]
pub struct FreeChainComplex {
    ring: CoeffRing,
    dims: Vec<usize>,
    /// `diffs[n]` maps degree `n` to degree `n - 1`; `diffs[0]` has no rows.
    diffs: Vec<ExactMatrix>,
}

impl FreeChainComplex {
    /// A complex that vanishes above the last given degree.
    /// `diffs[k]` is the differential out of degree `k + 1`.
    pub fn bounded(ring: CoeffRing, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self, LinalgError> {
        let mut c = Self::truncated(ring, dims, diffs)?;
        let top = *c.dims.last().unwrap_or(&0);
        if !c.dims.is_empty() {
            c.dims.push(0);
            c.diffs.push(ExactMatrix::zeros(ring, top, 0));
        }
        Ok(c)
    }

    /// The first `dims.len()` degrees of a possibly longer complex.
    pub fn truncated(ring: CoeffRing, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self, LinalgError> {
        if dims.is_empty() {
            if !diffs.is_empty() {
                return Err(LinalgError::Shape("differentials without modules".into()));
            }
            return Ok(FreeChainComplex { ring, dims, diffs: Vec::new() });
        }
        if diffs.len() + 1 != dims.len() {
            return Err(LinalgError::Shape(format!(
                "{} modules need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        let mut all = Vec::with_capacity(dims.len());
        all.push(ExactMatrix::zeros(ring, 0, dims[0]));
        for (k, d) in diffs.into_iter().enumerate() {
            let n = k + 1;
            if d.shape() != (dims[n - 1], dims[n]) {
                return Err(LinalgError::Shape(format!(
                    "d[{n}] is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[n - 1],
                    dims[n]
                )));
            }
            if d.ring() != ring {
                return Err(LinalgError::Shape(format!("d[{n}] is over {}", d.ring())));
            }
            all.push(d);
        }
        for n in 2..dims.len() {
            if !all[n - 1].mul(&all[n])?.is_zero() {
                return Err(LinalgError::NotAComplex(n - 1, n));
            }
        }
        Ok(FreeChainComplex { ring, dims, diffs: all })
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    /// Dimension in degree `n`; zero beyond the stored range.
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The differential out of degree `n`, if stored.
    pub fn differential(&self, n: usize) -> Option<&ExactMatrix> {
        self.diffs.get(n)
    }

    /// Largest degree whose homology is determined, if any.
    pub fn homology_top(&self) -> Option<usize> {
        self.dims.len().checked_sub(2)
    }

    fn check_window(&self, n: usize) -> Result<(), LinalgError> {
        match self.homology_top() {
            Some(t) if n <= t => Ok(()),
            _ => Err(LinalgError::OutsideWindow(n)),
        }
    }

    /// The same complex with every entry reduced into `ring`.
    pub fn change_ring(&self, ring: CoeffRing) -> Result<FreeChainComplex, LinalgError> {
        let diffs = self.diffs.iter().map(|d| d.change_ring(ring)).collect::<Result<Vec<_>, _>>()?;
        let c = FreeChainComplex { ring, dims: self.dims.clone(), diffs };
        for n in 2..c.dims.len() {
            if !c.diffs[n - 1].mul(&c.diffs[n])?.is_zero() {
                return Err(LinalgError::NotAComplex(n - 1, n));
            }
        }
        Ok(c)
    }
}

/// Homology in one degree: free rank plus invariant factors larger than one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub rank: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<BigInt>,
}

/// Serialises torsion coefficients as decimal strings.
pub fn serialize_torsion<S: serde::Serializer>(t: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub ring: CoeffRing,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn rank(&self, n: usize) -> usize {
        self.degrees.iter().find(|d| d.degree == n).map_or(0, |d| d.rank)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.rank).collect()
    }

    /// Whether all listed degrees are zero.
    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.rank == 0 && d.torsion.is_empty())
    }
}

/// Homology of `c` in the given degrees.
///
/// Over a field this is `dim C_n - rank d_n - rank d_{n+1}`. Over the
/// integers the free part uses rational ranks and the torsion comes from the
/// Smith form of `d_{n+1}`.
pub fn complex_homology(c: &FreeChainComplex, degrees: RangeInclusive<usize>) -> Result<HomologySummary, LinalgError> {
    let mut out = Vec::new();
    let mut ranks: Vec<Option<usize>> = vec![None; c.dims.len()];
    let mut rank_of = |n: usize| -> usize { *ranks[n].get_or_insert_with(|| c.diffs[n].rank()) };
    for n in degrees {
        c.check_window(n)?;
        let rank = c.dims[n] - rank_of(n) - rank_of(n + 1);
        let torsion = if c.ring == CoeffRing::Integers {
            smith_normal_form(&c.diffs[n + 1])?.invariant_factors().into_iter().filter(|x| !x.is_one()).collect()
        } else {
            Vec::new()
        };
        out.push(DegreeHomology { degree: n, rank, torsion });
    }
    Ok(HomologySummary { ring: c.ring, degrees: out })
}

/// A basis of `H_n` given by cycle representatives, with a coordinate map.
///
/// Representatives are taken among kernel basis vectors of `d_n` in the
/// order the elimination produces them, so the basis is reproducible.
pub struct HomologyBasis {
    quotient: Subquotient,
}

impl HomologyBasis {
    pub fn new(c: &FreeChainComplex, n: usize) -> Result<Self, LinalgError> {
        c.check_window(n)?;
        Self::from_differentials(&c.diffs[n], &c.diffs[n + 1])
    }

    /// Homology of `A --d_in--> B --d_out--> C` at `B`.
    pub fn from_differentials(d_out: &ExactMatrix, d_in: &ExactMatrix) -> Result<Self, LinalgError> {
        let ring = d_out.ring();
        if !ring.is_field() {
            return Err(LinalgError::RequiresField("homology basis"));
        }
        let cycles = d_out.kernel_basis()?;
        let quotient = Subquotient::new(ring, d_in.columns().iter().cloned(), cycles.into_columns())?;
        Ok(HomologyBasis { quotient })
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn representatives(&self) -> &[SparseVec] {
        self.quotient.representatives()
    }

    /// Coordinates of the class of the cycle `v`.
    pub fn coordinates(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        self.quotient.coordinates(v)
    }
}

/// Per-degree matrices `f_n : C_n -> D_n`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub maps: Vec<ExactMatrix>,
}

impl ChainMap {
    /// Checks `d f_n = f_{n-1} d` for all degrees where both sides are stored.
    pub fn verify(&self, c: &FreeChainComplex, d: &FreeChainComplex) -> Result<(), LinalgError> {
        for n in 0..self.maps.len() {
            self.verify_degree(c, d, n)?;
        }
        Ok(())
    }

    fn verify_degree(&self, c: &FreeChainComplex, d: &FreeChainComplex, n: usize) -> Result<(), LinalgError> {
        let Some(f) = self.maps.get(n) else { return Ok(()) };
        if f.shape() != (d.dim(n), c.dim(n)) {
            return Err(LinalgError::Shape(format!("f[{n}] is {}x{}", f.rows(), f.cols())));
        }
        if n == 0 {
            return Ok(());
        }
        let (Some(g), Some(dc), Some(dd)) = (self.maps.get(n - 1), c.differential(n), d.differential(n)) else {
            return Ok(());
        };
        if dd.mul(f)? != g.mul(dc)? {
            return Err(LinalgError::NotAChainMap(n));
        }
        Ok(())
    }
}

/// The matrix of `H_n(f)` in the bases of [`HomologyBasis`].
pub fn induced_homology_map(
    f: &ChainMap,
    c: &FreeChainComplex,
    d: &FreeChainComplex,
    n: usize,
) -> Result<ExactMatrix, LinalgError> {
    let fn_ = f.maps.get(n).ok_or(LinalgError::Shape(format!("no map in degree {n}")))?;
    f.verify_degree(c, d, n)?;
    f.verify_degree(c, d, n + 1)?;
    let hc = HomologyBasis::new(c, n)?;
    let hd = HomologyBasis::new(d, n)?;
    let columns = hc
        .representatives()
        .iter()
        .map(|z| hd.coordinates(&fn_.apply(z)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_columns(c.ring(), hd.dim(), columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ring: CoeffRing, rows: &[Vec<i64>], cols: usize) -> ExactMatrix {
        ExactMatrix::from_rows(ring, rows, cols).unwrap()
    }

    #[test]
    fn multiplication_by_two_over_integers() {
        let z = CoeffRing::Integers;
        let c = FreeChainComplex::bounded(z, vec![1, 1], vec![m(z, &[vec![2]], 1)]).unwrap();
        let h = complex_homology(&c, 0..=1).unwrap();
        assert_eq!(h.degrees[0], DegreeHomology { degree: 0, rank: 0, torsion: vec![BigInt::from(2)] });
        assert_eq!(h.degrees[1], DegreeHomology { degree: 1, rank: 0, torsion: vec![] });

        let q = complex_homology(&c.change_ring(CoeffRing::Rationals).unwrap(), 0..=1).unwrap();
        assert_eq!(q.ranks(), vec![0, 0]);
        let f2 = complex_homology(&c.change_ring(CoeffRing::Prime(2)).unwrap(), 0..=1).unwrap();
        assert_eq!(f2.ranks(), vec![1, 1]);
    }

    #[test]
    fn zero_differentials() {
        let q = CoeffRing::Rationals;
        let c = FreeChainComplex::bounded(q, vec![2, 3, 1], vec![ExactMatrix::zeros(q, 2, 3), ExactMatrix::zeros(q, 3, 1)])
            .unwrap();
        assert_eq!(complex_homology(&c, 0..=2).unwrap().ranks(), vec![2, 3, 1]);
        assert!(complex_homology(&c, 0..=3).is_err());
    }

    #[test]
    fn truncated_window() {
        let q = CoeffRing::Rationals;
        let c = FreeChainComplex::truncated(q, vec![1, 1], vec![m(q, &[vec![1]], 1)]).unwrap();
        assert_eq!(c.homology_top(), Some(0));
        assert!(complex_homology(&c, 1..=1).is_err());
    }

    #[test]
    fn rejects_non_complex() {
        let q = CoeffRing::Rationals;
        let r = FreeChainComplex::bounded(q, vec![1, 1, 1], vec![m(q, &[vec![1]], 1), m(q, &[vec![1]], 1)]);
        assert_eq!(r.unwrap_err(), LinalgError::NotAComplex(1, 2));
    }

    #[test]
    fn induced_maps() {
        let q = CoeffRing::Rationals;
        let c = FreeChainComplex::bounded(q, vec![2], vec![]).unwrap();
        let id = ChainMap { maps: vec![ExactMatrix::identity(q, 2)] };
        assert_eq!(induced_homology_map(&id, &c, &c, 0).unwrap(), ExactMatrix::identity(q, 2));
        let zero = ChainMap { maps: vec![ExactMatrix::zeros(q, 2, 2)] };
        assert!(induced_homology_map(&zero, &c, &c, 0).unwrap().is_zero());

        // multiplication V (x) V -> V in the basis 1(x)1, 1(x)x, x(x)1, x(x)x
        let vv = FreeChainComplex::bounded(q, vec![4], vec![]).unwrap();
        let v = FreeChainComplex::bounded(q, vec![2], vec![]).unwrap();
        let mult = m(q, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]], 4);
        let h = induced_homology_map(&ChainMap { maps: vec![mult.clone()] }, &vv, &v, 0).unwrap();
        assert_eq!(h, mult);
        assert_eq!(mult.kernel_basis().unwrap().cols(), 2);
    }

    #[test]
    fn rejects_non_chain_map() {
        let q = CoeffRing::Rationals;
        let c = FreeChainComplex::bounded(q, vec![1, 1], vec![m(q, &[vec![1]], 1)]).unwrap();
        let z = FreeChainComplex::bounded(q, vec![1, 1], vec![ExactMatrix::zeros(q, 1, 1)]).unwrap();
        let f = ChainMap { maps: vec![ExactMatrix::identity(q, 1), ExactMatrix::zeros(q, 1, 1)] };
        assert!(matches!(induced_homology_map(&f, &c, &z, 0), Err(LinalgError::NotAChainMap(1))));
    }
}
