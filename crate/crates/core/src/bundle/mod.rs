//! Bundles of coloured posets over a base poset, and their total coloured posets.

mod colourings;
mod decompose;
mod json;

use std::collections::HashMap;

use crate::coloured::{ColouredError, ColouredPoset, ColouredPosetMorphism};
use crate::linalg::{CoeffRing, ExactMatrix, LinalgError};
use crate::poset::{Poset, PosetError};

pub use colourings::{chain_colouring, fibre_homology_colouring, q_chain_colouring};
pub use decompose::boolean_decompose;
pub use json::{BundleJson, FibreMorphismJson};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Coloured(#[from] ColouredError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("expected {expected} fibres, got {got}")]
    FibreCount { expected: usize, got: usize },
    #[error("fibres are over different rings")]
    RingMismatch,
    #[error("no morphism for the base cover {0} < {1}")]
    MissingMorphism(String, String),
    #[error("morphism over {from} < {to}: {reason}")]
    InvalidMorphism { from: String, to: String, reason: String },
    #[error("composites from {from} to {to} depend on the path")]
    NotFunctorial { from: String, to: String },
    #[error("the coloured poset is not a Boolean lattice with a ground set")]
    NotBoolean,
    #[error("`{0}` is not in the ground set")]
    NotInGround(String),
    #[error("{0} needs a field")]
    RequiresField(&'static str),
    #[error("invalid bundle JSON: {0}")]
    Json(String),
}

/// A functor from a base poset to coloured posets.
///
/// Morphisms are given on base covers; composites for every `x <= z` are
/// formed at construction, where functoriality is checked.
#[derive(Clone, Debug)]
pub struct Bundle {
    base: Poset,
    ring: CoeffRing,
    fibres: Vec<ColouredPoset>,
    morphisms: HashMap<(usize, usize), ColouredPosetMorphism>,
}

impl Bundle {
    pub fn new(
        base: Poset,
        fibres: Vec<ColouredPoset>,
        cover_morphisms: HashMap<(usize, usize), ColouredPosetMorphism>,
    ) -> Result<Bundle, BundleError> {
        if fibres.len() != base.len() {
            return Err(BundleError::FibreCount { expected: base.len(), got: fibres.len() });
        }
        let ring = fibres[0].ring();
        if fibres.iter().any(|f| f.ring() != ring) {
            return Err(BundleError::RingMismatch);
        }
        for (x, z) in base.covers() {
            let m = cover_morphisms
                .get(&(x, z))
                .ok_or_else(|| BundleError::MissingMorphism(base.label(x).into(), base.label(z).into()))?;
            m.validate(&fibres[x], &fibres[z]).map_err(|e| BundleError::InvalidMorphism {
                from: base.label(x).into(),
                to: base.label(z).into(),
                reason: e.to_string(),
            })?;
        }
        let order = base.linear_extension();
        let mut morphisms = HashMap::new();
        for x in 0..base.len() {
            morphisms.insert((x, x), ColouredPosetMorphism::identity(&fibres[x]));
            for &z in order.iter().filter(|&&z| base.lt(x, z)) {
                let mut found: Option<ColouredPosetMorphism> = None;
                for &w in base.down_covers(z).iter().filter(|&&w| base.leq(x, w)) {
                    let m = morphisms[&(x, w)].then(&cover_morphisms[&(w, z)])?;
                    match &found {
                        None => found = Some(m),
                        Some(prev) if *prev == m => {}
                        Some(_) => {
                            return Err(BundleError::NotFunctorial {
                                from: base.label(x).into(),
                                to: base.label(z).into(),
                            })
                        }
                    }
                }
                morphisms.insert((x, z), found.expect("lower cover above x"));
            }
        }
        Ok(Bundle { base, ring, fibres, morphisms })
    }

    /// The product bundle: every fibre is `fibre`, every morphism the identity.
    pub fn product(base: Poset, fibre: ColouredPoset) -> Bundle {
        let id = ColouredPosetMorphism::identity(&fibre);
        let covers = base.covers().map(|c| (c, id.clone())).collect();
        let fibres = vec![fibre; base.len()];
        Bundle::new(base, fibres, covers).expect("product bundles are functorial")
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn fibre(&self, x: usize) -> &ColouredPoset {
        &self.fibres[x]
    }

    pub fn fibres(&self) -> &[ColouredPoset] {
        &self.fibres
    }

    /// `(f_x^z, tau_x^z)`. Panics unless `x <= z`.
    pub fn morphism(&self, x: usize, z: usize) -> &ColouredPosetMorphism {
        self.morphisms.get(&(x, z)).unwrap_or_else(|| {
            panic!("{} is not below {}", self.base.label(x), self.base.label(z))
        })
    }

    pub fn cover_morphisms(&self) -> HashMap<(usize, usize), ColouredPosetMorphism> {
        self.base.covers().map(|c| (c, self.morphisms[&c].clone())).collect()
    }

    /// The bundle restricted to the base elements `keep`, which must have a greatest element.
    pub fn restrict(&self, keep: &[usize]) -> Result<Bundle, BundleError> {
        let base = self.base.induced(keep)?;
        let fibres = keep.iter().map(|&x| self.fibres[x].clone()).collect();
        let covers = base.covers().map(|(a, b)| ((a, b), self.morphisms[&(keep[a], keep[b])].clone())).collect();
        Bundle::new(base, fibres, covers)
    }

    /// The same bundle with every matrix reduced into `ring`.
    pub fn change_ring(&self, ring: CoeffRing) -> Result<Bundle, BundleError> {
        let fibres = self.fibres.iter().map(|f| f.change_ring(ring)).collect::<Result<Vec<_>, _>>()?;
        let covers = self
            .cover_morphisms()
            .into_iter()
            .map(|(k, m)| {
                let tau = m.tau.iter().map(|t| t.change_ring(ring)).collect::<Result<Vec<_>, _>>()?;
                Ok((k, ColouredPosetMorphism { f: m.f, tau }))
            })
            .collect::<Result<HashMap<_, _>, LinalgError>>()?;
        Bundle::new(self.base.clone(), fibres, covers)
    }

    /// The associated total coloured poset.
    pub fn total(&self) -> TotalColouredPoset {
        let base = &self.base;
        let mut offsets = Vec::with_capacity(base.len());
        let mut members = Vec::new();
        for x in 0..base.len() {
            offsets.push(members.len());
            members.extend((0..self.fibres[x].poset().len()).map(|y| (x, y)));
        }
        let n = members.len();
        let leq_of = |&(x, y): &(usize, usize), &(x2, y2): &(usize, usize)| {
            base.leq(x, x2) && self.fibres[x2].poset().leq(self.morphisms[&(x, x2)].f[y], y2)
        };
        let leq: Vec<Vec<bool>> = members.iter().map(|a| members.iter().map(|b| leq_of(a, b)).collect()).collect();
        let labels = members
            .iter()
            .map(|&(x, y)| format!("({},{})", base.label(x), self.fibres[x].poset().label(y)))
            .collect();
        let poset = Poset::from_order(labels, leq).expect("total poset of a bundle has a 1");
        let dims = members.iter().map(|&(x, y)| self.fibres[x].dim(y)).collect();
        let covers = poset
            .covers()
            .map(|(a, b)| {
                let ((x, y), (x2, y2)) = (members[a], members[b]);
                let m = &self.morphisms[&(x, x2)];
                let colour = self.fibres[x2].map(m.f[y], y2).mul(&m.tau[y]).expect("shapes agree");
                ((a, b), colour)
            })
            .collect::<HashMap<(usize, usize), ExactMatrix>>();
        let total = ColouredPoset::new(poset, self.ring, dims, covers)
            .expect("the total of a bundle is a coloured poset");
        debug_assert_eq!(n, total.poset().len());
        TotalColouredPoset { total, members, offsets }
    }
}

/// A total coloured poset `(E, F)` with its projection to the base.
///
/// Element `offsets[x] + y` of `E` is element `y` of the fibre over `x`.
#[derive(Clone, Debug)]
pub struct TotalColouredPoset {
    pub total: ColouredPoset,
    members: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl TotalColouredPoset {
    /// `(base element, fibre element)` of an element of `E`.
    pub fn member(&self, e: usize) -> (usize, usize) {
        self.members[e]
    }

    pub fn projection(&self, e: usize) -> usize {
        self.members[e].0
    }

    pub fn element(&self, x: usize, y: usize) -> usize {
        self.offsets[x] + y
    }

    /// Elements of `E` lying over base elements in `keep`.
    pub fn over(&self, keep: &[usize]) -> Vec<usize> {
        (0..self.members.len()).filter(|&e| keep.contains(&self.members[e].0)).collect()
    }
}

/// A morphism `(g, eta)` of bundles: `eta[x]` maps the fibre over `x` to the fibre over `g(x)`.
#[derive(Clone, Debug)]
pub struct BundleMorphism {
    pub g: Vec<usize>,
    pub eta: Vec<ColouredPosetMorphism>,
}

impl BundleMorphism {
    pub fn identity(xi: &Bundle) -> BundleMorphism {
        BundleMorphism {
            g: (0..xi.base.len()).collect(),
            eta: xi.fibres.iter().map(ColouredPosetMorphism::identity).collect(),
        }
    }

    pub fn validate(&self, src: &Bundle, dst: &Bundle) -> Result<(), BundleError> {
        let (b, b2) = (&src.base, &dst.base);
        let fail = |x: usize, z: usize, reason: String| {
            Err(BundleError::InvalidMorphism { from: b.label(x).into(), to: b.label(z).into(), reason })
        };
        if self.g.len() != b.len() || self.eta.len() != b.len() {
            return Err(BundleError::FibreCount { expected: b.len(), got: self.g.len().min(self.eta.len()) });
        }
        for x in 0..b.len() {
            if self.g[x] >= b2.len() || (self.g[x] == b2.top()) != (x == b.top()) {
                return fail(x, x, "only the top may map to the top".into());
            }
            if let Err(e) = self.eta[x].validate(&src.fibres[x], &dst.fibres[self.g[x]]) {
                return fail(x, x, e.to_string());
            }
        }
        for (x, z) in b.covers() {
            let (gx, gz) = (self.g[x], self.g[z]);
            if !b2.leq(gx, gz) {
                return fail(x, z, "base map does not preserve order".into());
            }
            let left = src.morphisms[&(x, z)].then(&self.eta[z])?;
            let right = self.eta[x].then(&dst.morphisms[&(gx, gz)])?;
            if left != right {
                return fail(x, z, "not natural".into());
            }
        }
        Ok(())
    }

    /// `other . self`.
    pub fn then(&self, other: &BundleMorphism) -> Result<BundleMorphism, BundleError> {
        let g = self.g.iter().map(|&y| other.g[y]).collect();
        let eta = self
            .eta
            .iter()
            .zip(&self.g)
            .map(|(e, &y)| e.then(&other.eta[y]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BundleMorphism { g, eta })
    }

    /// The induced fibre-preserving morphism of total coloured posets.
    pub fn on_totals(
        &self,
        src: &TotalColouredPoset,
        dst: &TotalColouredPoset,
    ) -> ColouredPosetMorphism {
        let n = src.members.len();
        let mut f = Vec::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        for e in 0..n {
            let (x, y) = src.members[e];
            f.push(dst.element(self.g[x], self.eta[x].f[y]));
            tau.push(self.eta[x].tau[y].clone());
        }
        ColouredPosetMorphism { f, tau }
    }
}

/// Validates `(g, eta)` and returns the morphism it induces between totals.
pub fn apply_bundle_morphism(
    m: &BundleMorphism,
    src: &Bundle,
    dst: &Bundle,
) -> Result<ColouredPosetMorphism, BundleError> {
    m.validate(src, dst)?;
    Ok(m.on_totals(&src.total(), &dst.total()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CoeffRing {
        CoeffRing::Rationals
    }

    #[test]
    fn product_total() {
        let fibre = ColouredPoset::constant(Poset::boolean(1), q(), 2);
        let xi = Bundle::product(Poset::boolean(2), fibre);
        let t = xi.total();
        assert_eq!(t.total.poset().len(), 8);
        assert!(t.total.poset().find_isomorphism(&Poset::boolean(3)).is_some());
        let top = t.total.poset().top();
        assert_eq!(t.member(top), (3, 1));
        assert_eq!(t.total.poset().label(0), "({},{})");
    }

    #[test]
    fn gluing_over_boolean_one() {
        // fibre over 0 is a point mapped into the top of a two-element fibre
        let p0 = ColouredPoset::constant(Poset::boolean(0), q(), 1);
        let p1 = ColouredPoset::constant(Poset::boolean(1), q(), 1);
        let m = ColouredPosetMorphism { f: vec![1], tau: vec![ExactMatrix::identity(q(), 1)] };
        let xi = Bundle::new(Poset::boolean(1), vec![p0, p1], HashMap::from([((0, 1), m)])).unwrap();
        let t = xi.total();
        assert_eq!(t.total.poset().len(), 3);
        // (0,top) sits below the top of the other fibre but not below its bottom
        assert!(t.total.poset().leq(0, 2));
        assert!(!t.total.poset().leq(0, 1));
    }

    #[test]
    fn restriction_partitions_total() {
        let fibre = ColouredPoset::constant(Poset::chain(2), q(), 1);
        let xi = Bundle::product(Poset::boolean(2), fibre);
        let x = 1;
        let lower = xi.restrict(&xi.base().below(x)).unwrap();
        let upper = xi.restrict(&xi.base().not_below(x)).unwrap();
        assert_eq!(upper.base().label(upper.base().top()), "{1,2}");
        assert_eq!(lower.total().total.poset().len() + upper.total().total.poset().len(), xi.total().total.poset().len());
        let point = xi.restrict(&[3]).unwrap();
        assert_eq!(point.base().len(), 1);
    }

    #[test]
    fn non_functorial_square() {
        let fibre = ColouredPoset::constant(Poset::boolean(0), q(), 1);
        let base = Poset::boolean(2);
        let mut covers: HashMap<_, _> =
            base.covers().map(|c| (c, ColouredPosetMorphism::identity(&fibre))).collect();
        covers.get_mut(&(0, 1)).unwrap().tau[0] = ExactMatrix::identity(q(), 1).neg();
        let err = Bundle::new(base, vec![fibre; 4], covers).unwrap_err();
        assert!(matches!(err, BundleError::NotFunctorial { .. }));
    }

    #[test]
    fn identity_bundle_morphism() {
        let fibre = ColouredPoset::constant(Poset::boolean(1), q(), 1);
        let xi = Bundle::product(Poset::boolean(1), fibre);
        let id = BundleMorphism::identity(&xi);
        let e = apply_bundle_morphism(&id, &xi, &xi).unwrap();
        assert_eq!(e, ColouredPosetMorphism::identity(&xi.total().total));
    }
}
