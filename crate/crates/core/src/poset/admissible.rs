//! Admissibility and special admissibility.
//!
//! Both searches run on subsets of the original poset with the induced
//! order, so certificates refer to the original labels throughout.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::Poset;

/// A witness `x` covered by `1`, with the minimum of `L(y)` for every `y < x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityCertificate {
    pub witness: String,
    pub minima: BTreeMap<String, String>,
}

/// A recursion tree for special admissibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecialCertificate {
    /// Two elements `0 < 1`.
    BooleanRankOne { elements: [String; 2] },
    Split {
        admissible: AdmissibilityCertificate,
        interval: Box<SpecialCertificate>,
        complement: Box<SpecialCertificate>,
    },
}

impl SpecialCertificate {
    pub fn witness(&self) -> Option<&str> {
        match self {
            SpecialCertificate::BooleanRankOne { .. } => None,
            SpecialCertificate::Split { admissible, .. } => Some(&admissible.witness),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SpecialCertificate::BooleanRankOne { .. } => 0,
            SpecialCertificate::Split { interval, complement, .. } => 1 + interval.depth().max(complement.depth()),
        }
    }
}

/// A subset of `p` that has a greatest element.
struct View<'a> {
    p: &'a Poset,
    elements: Vec<usize>,
    top: usize,
}

impl<'a> View<'a> {
    fn new(p: &'a Poset, elements: Vec<usize>) -> Option<Self> {
        let top = *elements.iter().find(|&&t| elements.iter().all(|&y| p.leq(y, t)))?;
        Some(View { p, elements, top })
    }

    /// Elements covered by the top inside the view, in label order.
    fn coatoms(&self) -> Vec<usize> {
        let p = self.p;
        let mut c: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|&x| x != self.top && !self.elements.iter().any(|&z| p.lt(x, z) && p.lt(z, self.top)))
            .collect();
        c.sort_by(|a, b| p.label(*a).cmp(p.label(*b)));
        c
    }

    fn check_witness(&self, x: usize) -> Option<AdmissibilityCertificate> {
        let p = self.p;
        let off: Vec<usize> = self.elements.iter().copied().filter(|&z| !p.leq(z, x)).collect();
        let mut minima = BTreeMap::new();
        for &y in self.elements.iter().filter(|&&y| p.lt(y, x)) {
            let l: Vec<usize> = off.iter().copied().filter(|&z| p.leq(y, z)).collect();
            let mins: Vec<usize> = l.iter().copied().filter(|&z| !l.iter().any(|&w| p.lt(w, z))).collect();
            // a single-element L(y) has a 1 but no 0
            match mins.as_slice() {
                [m] if l.len() >= 2 => {
                    minima.insert(p.label(y).to_string(), p.label(*m).to_string());
                }
                _ => return None,
            }
        }
        Some(AdmissibilityCertificate { witness: p.label(x).to_string(), minima })
    }

    fn split(&self, x: usize) -> (Vec<usize>, Vec<usize>) {
        self.elements.iter().partition(|&&y| self.p.leq(y, x))
    }
}

/// Checks the admissibility condition for a given `x` covered by `1`.
pub fn admissible_for(p: &Poset, x: usize) -> Option<AdmissibilityCertificate> {
    if !p.down_covers(p.top()).contains(&x) {
        return None;
    }
    View::new(p, (0..p.len()).collect())?.check_witness(x)
}

/// The certificate for the first witness in label order, if any.
pub fn is_admissible(p: &Poset) -> Option<AdmissibilityCertificate> {
    let v = View::new(p, (0..p.len()).collect())?;
    v.coatoms().into_iter().find_map(|x| v.check_witness(x))
}

/// Searches for a special-admissibility tree, backtracking over witnesses.
pub fn is_specially_admissible(p: &Poset) -> Option<SpecialCertificate> {
    let mut memo = HashMap::new();
    special(p, (0..p.len()).collect(), &mut memo)
}

fn special(
    p: &Poset,
    elements: Vec<usize>,
    memo: &mut HashMap<Vec<usize>, Option<SpecialCertificate>>,
) -> Option<SpecialCertificate> {
    if let Some(hit) = memo.get(&elements) {
        return hit.clone();
    }
    let result = special_uncached(p, &elements, memo);
    memo.insert(elements, result.clone());
    result
}

fn special_uncached(
    p: &Poset,
    elements: &[usize],
    memo: &mut HashMap<Vec<usize>, Option<SpecialCertificate>>,
) -> Option<SpecialCertificate> {
    let v = View::new(p, elements.to_vec())?;
    if let [a, b] = elements {
        let (lo, hi) = if p.leq(*a, *b) { (*a, *b) } else { (*b, *a) };
        return Some(SpecialCertificate::BooleanRankOne { elements: [p.label(lo).into(), p.label(hi).into()] });
    }
    for x in v.coatoms() {
        let Some(admissible) = v.check_witness(x) else { continue };
        let (lower, upper) = v.split(x);
        let Some(interval) = special(p, lower, memo) else { continue };
        let Some(complement) = special(p, upper, memo) else { continue };
        return Some(SpecialCertificate::Split {
            admissible,
            interval: Box::new(interval),
            complement: Box::new(complement),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_are_not_admissible() {
        assert!(is_admissible(&Poset::chain(1)).is_none());
        assert!(is_admissible(&Poset::chain(2)).is_some());
        for n in 3..7 {
            assert!(is_admissible(&Poset::chain(n)).is_none());
            assert!(is_specially_admissible(&Poset::chain(n)).is_none());
        }
    }

    #[test]
    fn boolean_minima() {
        let b = Poset::boolean(3);
        // x = {1,2}: the minimum of L(Y) is Y with 3 added
        let x = b.index_of("{1,2}").unwrap();
        let cert = admissible_for(&b, x).unwrap();
        assert_eq!(cert.minima["{}"], "{3}");
        assert_eq!(cert.minima["{1}"], "{1,3}");
        assert_eq!(cert.minima.len(), 3);
        for c in b.coatoms() {
            assert!(admissible_for(&b, c).is_some());
        }
        let l = b.upper_set_off_interval(x, b.index_of("{2}").unwrap()).unwrap();
        assert_eq!(l.label(l.bottom().unwrap()), "{2,3}");
    }

    #[test]
    fn special_families() {
        for n in 1..=4 {
            let c = is_specially_admissible(&Poset::boolean(n)).unwrap();
            assert_eq!(c.depth(), n - 1);
        }
        for m in 2..=6 {
            assert!(is_specially_admissible(&Poset::bruhat_dihedral(m)).is_some(), "I2({m})");
        }
        let s4 = Poset::bruhat_symmetric(4);
        for x in s4.coatoms() {
            assert!(admissible_for(&s4, x).is_some());
        }
        assert!(is_specially_admissible(&s4).is_some());
    }

    #[test]
    fn one_element_is_not_special() {
        assert!(is_specially_admissible(&Poset::boolean(0)).is_none());
        assert!(is_admissible(&Poset::boolean(0)).is_none());
    }
}
