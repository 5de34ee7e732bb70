//! Finite posets with a unique maximal element.

mod admissible;
mod constructors;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use admissible::{
    admissible_for, is_admissible, is_specially_admissible, AdmissibilityCertificate, SpecialCertificate,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("a poset needs at least one element")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relations contain a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("more than one maximal element: {0:?}")]
    MultipleMaximal(Vec<String>),
    #[error("the requested subposet is empty")]
    EmptyResult,
    #[error("`{0}` is not in the ground set")]
    NotInGround(String),
    #[error("invalid poset JSON: {0}")]
    Json(String),
}

/// A finite poset with a greatest element `1`.
///
/// Elements are indices `0..len()` carrying string labels. The order is
/// stored in full, covers are precomputed in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    top: usize,
    /// Ground set when this is a Boolean lattice whose element `i` is the subset with bitmask `i`.
    ground: Option<Vec<String>>,
}

/// The JSON form: relations generate the order by transitive closure.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

impl Poset {
    /// Builds the poset generated by `relations`, each pair `(a, b)` meaning `a <= b`.
    pub fn build(elements: Vec<String>, relations: &[(String, String)]) -> Result<Poset, PosetError> {
        let n = elements.len();
        let index = label_index(&elements)?;
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let i = *index.get(a).ok_or_else(|| PosetError::UnknownElement(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| PosetError::UnknownElement(b.clone()))?;
            leq[i][j] = true;
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
        Self::from_order(elements, leq)
    }

    /// Builds a poset from a full order relation, which must be reflexive and transitive.
    pub(crate) fn from_order(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Poset, PosetError> {
        let n = labels.len();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        let index = label_index(&labels)?;
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(PosetError::Cycle(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        let maximal: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| j == i || !leq[i][j])).collect();
        if maximal.len() != 1 {
            return Err(PosetError::MultipleMaximal(maximal.iter().map(|&i| labels[i].clone()).collect()));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]) {
                    up[x].push(y);
                    down[y].push(x);
                }
            }
        }
        Ok(Poset { labels, index, leq, up, down, top: maximal[0], ground: None })
    }

    pub fn from_json(json: &PosetJson) -> Result<Poset, PosetError> {
        Self::build(json.elements.clone(), &json.relations)
    }

    pub fn parse_json(text: &str) -> Result<Poset, PosetError> {
        let json: PosetJson = serde_json::from_str(text).map_err(|e| PosetError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    /// JSON form listing covers as relations.
    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            relations: self.covers().map(|(x, y)| (self.labels[x].clone(), self.labels[y].clone())).collect(),
        }
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

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// The unique minimal element, when there is one and it differs from `1`.
    pub fn bottom(&self) -> Option<usize> {
        let minimal: Vec<usize> = (0..self.len()).filter(|&x| self.down[x].is_empty()).collect();
        match minimal.as_slice() {
            [b] if *b != self.top => Some(*b),
            _ => None,
        }
    }

    /// Elements covering `x`.
    pub fn up_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Elements covered by `x`.
    pub fn down_covers(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up.iter().enumerate().flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Elements covered by `1`, in label order.
    pub fn coatoms(&self) -> Vec<usize> {
        let mut c = self.down[self.top].clone();
        c.sort_by(|a, b| self.labels[*a].cmp(&self.labels[*b]));
        c
    }

    /// Ground set, if this poset was built as a Boolean lattice.
    pub fn ground(&self) -> Option<&[String]> {
        self.ground.as_deref()
    }

    /// Length of the longest strict chain `x_1 < ... < x_k` avoiding `1`.
    pub fn longest_chain_below_top(&self) -> usize {
        let mut best = vec![0usize; self.len()];
        for x in self.linear_extension() {
            if x == self.top {
                continue;
            }
            best[x] = 1 + self.down[x].iter().map(|&y| best[y]).max().unwrap_or(0);
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Elements sorted so that `x < y` implies `x` comes first; ties by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let below = |x: usize| (0..self.len()).filter(|&y| self.leq[y][x]).count();
        order.sort_by_key(|&x| (below(x), x));
        order
    }

    /// The subposet on `keep`, which must contain a unique maximal element.
    /// Element `i` of the result is `keep[i]`.
    pub fn induced(&self, keep: &[usize]) -> Result<Poset, PosetError> {
        if keep.is_empty() {
            return Err(PosetError::EmptyResult);
        }
        let labels = keep.iter().map(|&x| self.labels[x].clone()).collect();
        let leq = keep.iter().map(|&x| keep.iter().map(|&y| self.leq[x][y]).collect()).collect();
        Self::from_order(labels, leq)
    }

    /// `{y | y <= x}`, in index order.
    pub fn below(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    /// `{y | not y <= x}`, in index order.
    pub fn not_below(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| !self.leq[y][x]).collect()
    }

    /// The interval `P(x)`, with top `x`.
    pub fn interval(&self, x: usize) -> Poset {
        self.induced(&self.below(x)).expect("an interval has a top")
    }

    /// The complement of `P(x)`, with top `1`.
    pub fn complement(&self, x: usize) -> Result<Poset, PosetError> {
        self.induced(&self.not_below(x))
    }

    /// `L(y) = {z not below x | y <= z}`.
    pub fn upper_set_off_interval(&self, x: usize, y: usize) -> Result<Poset, PosetError> {
        let keep: Vec<usize> = (0..self.len()).filter(|&z| !self.leq[z][x] && self.leq[y][z]).collect();
        self.induced(&keep)
    }

    /// An order isomorphism `self -> other` as an index map, found by backtracking.
    pub fn find_isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.cover_count() != other.cover_count() {
            return None;
        }
        let sig = |p: &Poset, x: usize| {
            let below = (0..n).filter(|&y| p.leq[y][x]).count();
            let above = (0..n).filter(|&y| p.leq[x][y]).count();
            (below, above, p.up[x].len(), p.down[x].len())
        };
        let order = self.linear_extension();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            k: usize,
            order: &[usize],
            a: &Poset,
            b: &Poset,
            sig: &dyn Fn(&Poset, usize) -> (usize, usize, usize, usize),
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in 0..b.len() {
                if used[y] || sig(a, x) != sig(b, y) {
                    continue;
                }
                let consistent = order[..k].iter().all(|&w| {
                    a.leq[w][x] == b.leq[map[w]][y] && a.leq[x][w] == b.leq[y][map[w]]
                });
                if !consistent {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(k + 1, order, a, b, sig, map, used) {
                    return true;
                }
                used[y] = false;
            }
            map[x] = usize::MAX;
            false
        }
        go(0, &order, self, other, &sig, &mut map, &mut used).then_some(map)
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<String, usize>, PosetError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(PosetError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}
