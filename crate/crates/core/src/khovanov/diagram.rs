//! Planar diagram codes, orientations and resolutions.

use std::collections::{BTreeMap, VecDeque};

use super::KhovanovError;

/// A link diagram given by crossings `X[i,j,k,l]`, slots listed counterclockwise
/// from the incoming under-strand, plus crossingless circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    /// Slots as dense arc indices.
    crossings: Vec<[usize; 4]>,
    /// Original arc label of each dense index, increasing.
    arc_labels: Vec<i64>,
    free_circles: usize,
    /// `incoming[c][s]`: the strand enters crossing `c` through slot `s`.
    incoming: Option<Vec<[bool; 4]>>,
}

/// Which way a strand passes through an arc pair, from an `orient=a>b` annotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcDirection {
    pub from: i64,
    pub to: i64,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        // keep the smaller root so representatives are canonical
        if a < b {
            self.parent[b] = a;
        } else {
            self.parent[a] = b;
        }
    }
}

/// The smoothing of every crossing in `alpha` (bit `c` set = 1-smoothing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub alpha: u64,
    /// Circles as sorted arc index lists, ordered by smallest arc;
    /// crossingless circles come last with no arcs.
    pub circles: Vec<Vec<usize>>,
    /// Circle containing each arc.
    pub circle_of_arc: Vec<usize>,
}

impl Resolution {
    pub fn k(&self) -> usize {
        self.circles.len()
    }

    pub fn rank(&self) -> usize {
        self.alpha.count_ones() as usize
    }
}

/// Slot pairs joined by the 0-smoothing and the 1-smoothing.
const SMOOTHINGS: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(0, 3), (1, 2)]];

impl LinkDiagram {
    /// Builds a diagram from labelled crossings; every arc must occur exactly twice.
    pub fn new(crossings: &[[i64; 4]], free_circles: usize) -> Result<LinkDiagram, KhovanovError> {
        let mut count: BTreeMap<i64, usize> = BTreeMap::new();
        for x in crossings {
            for a in x {
                *count.entry(*a).or_default() += 1;
            }
        }
        if let Some((a, n)) = count.iter().find(|(_, &n)| n != 2) {
            return Err(KhovanovError::ArcCount { arc: *a, count: *n });
        }
        if crossings.len() > 62 {
            return Err(KhovanovError::TooManyCrossings(crossings.len()));
        }
        let arc_labels: Vec<i64> = count.keys().copied().collect();
        let dense = |a: i64| arc_labels.binary_search(&a).expect("label was counted");
        let crossings = crossings.iter().map(|x| x.map(dense)).collect();
        Ok(LinkDiagram { crossings, arc_labels, free_circles, incoming: None })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_labels.len()
    }

    pub fn arc_label(&self, a: usize) -> i64 {
        self.arc_labels[a]
    }

    pub fn crossing(&self, c: usize) -> [i64; 4] {
        self.crossings[c].map(|a| self.arc_labels[a])
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    pub fn is_oriented(&self) -> bool {
        self.incoming.is_some()
    }

    /// Orients the diagram. With `pd_convention`, slot 1 of every crossing is
    /// incoming; `directions` pin further strands. Strands left free are
    /// oriented so their first slot (in crossing order) is incoming.
    pub fn orient(&mut self, pd_convention: bool, directions: &[ArcDirection]) -> Result<(), KhovanovError> {
        let n = self.crossings.len() * 4;
        // node c*4+s; an edge with `differ = true` forces opposite values
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut link = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); self.arc_labels.len()];
        for (c, x) in self.crossings.iter().enumerate() {
            link(c * 4, c * 4 + 2);
            link(c * 4 + 1, c * 4 + 3);
            for (s, &a) in x.iter().enumerate() {
                ends[a].push(c * 4 + s);
            }
        }
        for e in &ends {
            link(e[0], e[1]);
        }
        let mut pinned: Vec<Option<bool>> = vec![None; n];
        if pd_convention {
            for c in 0..self.crossings.len() {
                pinned[c * 4] = Some(true);
            }
        }
        for d in directions {
            let (Ok(from), Ok(to)) = (self.arc_labels.binary_search(&d.from), self.arc_labels.binary_search(&d.to)) else {
                return Err(KhovanovError::Orientation(format!("unknown arc in {}>{}", d.from, d.to)));
            };
            let slot = self.crossings.iter().enumerate().find_map(|(c, x)| {
                (0..4).find(|&s| x[s] == from && x[(s + 2) % 4] == to).map(|s| c * 4 + s)
            });
            let Some(node) = slot else {
                return Err(KhovanovError::Orientation(format!("arcs {} and {} do not meet", d.from, d.to)));
            };
            pinned[node] = Some(true);
        }
        let mut value: Vec<Option<bool>> = vec![None; n];
        // pinned nodes seed first so their components take the pinned value
        let seeds: Vec<(usize, bool)> = pinned
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|v| (i, v)))
            .chain((0..n).map(|i| (i, true)))
            .collect();
        for (seed, v) in seeds {
            if value[seed].is_some() {
                if value[seed] != Some(v) && pinned[seed].is_some() {
                    return Err(KhovanovError::Orientation("conflicting strand directions".into()));
                }
                continue;
            }
            value[seed] = Some(v);
            let mut queue = VecDeque::from([seed]);
            while let Some(u) = queue.pop_front() {
                let vu = value[u].expect("queued nodes are set");
                for &w in &adj[u] {
                    match value[w] {
                        None => {
                            if pinned[w] == Some(vu) {
                                return Err(KhovanovError::Orientation("conflicting strand directions".into()));
                            }
                            value[w] = Some(!vu);
                            queue.push_back(w);
                        }
                        Some(x) if x == vu => {
                            return Err(KhovanovError::Orientation("conflicting strand directions".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
        self.incoming = Some(
            (0..self.crossings.len())
                .map(|c| [0, 1, 2, 3].map(|s| value[c * 4 + s].expect("all nodes reached")))
                .collect(),
        );
        Ok(())
    }

    /// Crossing signs: positive when the over-strand enters one slot clockwise of
    /// where the under-strand enters.
    pub fn signs(&self) -> Option<Vec<i8>> {
        let inc = self.incoming.as_ref()?;
        Some(
            inc.iter()
                .map(|s| {
                    let under_in = if s[0] { 0 } else { 2 };
                    let over_in = if s[1] { 1 } else { 3 };
                    if over_in == (under_in + 3) % 4 {
                        1
                    } else {
                        -1
                    }
                })
                .collect(),
        )
    }

    /// `(N_+, N_-)`, when oriented.
    pub fn sign_counts(&self) -> Option<(usize, usize)> {
        let s = self.signs()?;
        let plus = s.iter().filter(|&&v| v > 0).count();
        Some((plus, s.len() - plus))
    }

    /// Circles of the resolution `alpha`.
    pub fn resolve(&self, alpha: u64) -> Resolution {
        let arcs = self.arc_labels.len();
        let mut uf = UnionFind::new(arcs);
        for (c, x) in self.crossings.iter().enumerate() {
            for &(a, b) in &SMOOTHINGS[(alpha >> c & 1) as usize] {
                uf.union(x[a], x[b]);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for a in 0..arcs {
            by_root.entry(uf.find(a)).or_default().push(a);
        }
        // roots are the smallest arcs, so this is already ordered by smallest arc
        let mut circles: Vec<Vec<usize>> = by_root.into_values().collect();
        let mut circle_of_arc = vec![0; arcs];
        for (i, c) in circles.iter().enumerate() {
            for &a in c {
                circle_of_arc[a] = i;
            }
        }
        circles.extend(std::iter::repeat_n(Vec::new(), self.free_circles));
        Resolution { alpha, circles, circle_of_arc }
    }

    /// The diagram with the crossings in `smoothed` resolved (bit set = 1-smoothing
    /// per `alpha`) and the other crossings kept, unoriented.
    pub fn partial_resolution(&self, smoothed: &[usize], alpha: u64) -> LinkDiagram {
        let arcs = self.arc_labels.len();
        let mut uf = UnionFind::new(arcs);
        for &c in smoothed {
            let x = self.crossings[c];
            for &(a, b) in &SMOOTHINGS[(alpha >> c & 1) as usize] {
                uf.union(x[a], x[b]);
            }
        }
        let kept: Vec<usize> = (0..self.crossings.len()).filter(|c| !smoothed.contains(c)).collect();
        let mut used = vec![false; arcs];
        let crossings: Vec<[i64; 4]> = kept
            .iter()
            .map(|&c| {
                self.crossings[c].map(|a| {
                    let r = uf.find(a);
                    used[r] = true;
                    self.arc_labels[r]
                })
            })
            .collect();
        let closed = (0..arcs).filter(|&a| uf.find(a) == a && !used[a]).count();
        LinkDiagram::new(&crossings, self.free_circles + closed).expect("smoothing keeps every arc end paired")
    }

    /// The same diagram with crossings listed in the order `perm`.
    pub fn reordered(&self, perm: &[usize]) -> LinkDiagram {
        let crossings: Vec<[i64; 4]> = perm.iter().map(|&c| self.crossing(c)).collect();
        let mut d = LinkDiagram::new(&crossings, self.free_circles).expect("same arcs");
        d.incoming = self.incoming.as_ref().map(|inc| perm.iter().map(|&c| inc[c]).collect());
        d
    }

    pub fn to_pd(&self) -> String {
        let xs: Vec<String> = (0..self.crossings.len())
            .map(|c| {
                let [a, b, x, y] = self.crossing(c);
                format!("X[{a},{b},{x},{y}]")
            })
            .collect();
        let mut s = format!("PD[{}]", xs.join(","));
        if self.free_circles > 0 {
            s.push_str(&format!(" circles={}", self.free_circles));
        }
        s
    }
}

fn parse_err(msg: impl Into<String>) -> KhovanovError {
    KhovanovError::Parse(msg.into())
}

/// Parses `PD[X[1,4,2,5],...]` followed by optional `circles=k` and
/// `orient=a>b,c>d` annotations. The result is oriented using the PD
/// convention; an unorientable code is left unoriented.
///
/// `PD[]` needs `circles=1` (or more) to describe an unknot.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, KhovanovError> {
    let text = text.trim();
    let rest = text.strip_prefix("PD[").ok_or_else(|| parse_err("expected `PD[`"))?;
    let mut depth = 1;
    let close = rest
        .char_indices()
        .find(|&(_, ch)| {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                _ => {}
            }
            depth == 0
        })
        .map(|(i, _)| i)
        .ok_or_else(|| parse_err("unbalanced brackets"))?;
    let (body, tail) = (&rest[..close], &rest[close + 1..]);
    let mut crossings = Vec::new();
    let mut body = body.trim();
    while !body.is_empty() {
        let inner = body.strip_prefix("X[").ok_or_else(|| parse_err(format!("expected `X[` at `{body}`")))?;
        let end = inner.find(']').ok_or_else(|| parse_err("unterminated crossing"))?;
        let labels = inner[..end]
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| parse_err(format!("bad arc label `{}`", t.trim()))))
            .collect::<Result<Vec<_>, _>>()?;
        let x: [i64; 4] = labels.try_into().map_err(|_| parse_err("a crossing has four arcs"))?;
        crossings.push(x);
        body = inner[end + 1..].trim_start();
        if let Some(r) = body.strip_prefix(',') {
            body = r.trim_start();
        }
    }
    let mut circles = None;
    let mut directions = Vec::new();
    for token in tail.split(|c: char| c.is_whitespace() || c == ';').filter(|t| !t.is_empty()) {
        if let Some(v) = token.strip_prefix("circles=") {
            circles = Some(v.parse::<usize>().map_err(|_| parse_err(format!("bad circle count `{v}`")))?);
        } else if let Some(v) = token.strip_prefix("orient=") {
            for pair in v.split(',').filter(|p| !p.is_empty()) {
                let (a, b) = pair.split_once('>').ok_or_else(|| parse_err(format!("bad direction `{pair}`")))?;
                let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| parse_err(format!("bad arc `{s}`")));
                directions.push(ArcDirection { from: parse(a)?, to: parse(b)? });
            }
        } else {
            return Err(parse_err(format!("unknown annotation `{token}`")));
        }
    }
    if crossings.is_empty() && circles.unwrap_or(0) == 0 {
        return Err(parse_err("a diagram without crossings needs `circles=k`"));
    }
    let mut d = LinkDiagram::new(&crossings, circles.unwrap_or(0))?;
    if d.orient(true, &directions).is_err() {
        if !directions.is_empty() {
            d.orient(false, &directions)?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";

    #[test]
    fn parses_the_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.sign_counts(), Some((0, 3)));
        assert_eq!(parse_pd(&d.to_pd()).unwrap(), d);
    }

    #[test]
    fn figure_eight_has_mixed_signs() {
        let d = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        assert_eq!(d.sign_counts(), Some((2, 2)));
    }

    #[test]
    fn kink_is_positive_with_two_zero_circles() {
        let d = parse_pd("PD[X[1,1,2,2]]").unwrap();
        assert_eq!(d.sign_counts(), Some((1, 0)));
        assert_eq!(d.resolve(0).k(), 2);
        assert_eq!(d.resolve(1).k(), 1);
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(matches!(parse_pd("PD[X[1,1,1,2]]"), Err(KhovanovError::ArcCount { arc: 1, count: 3 })));
        assert!(matches!(parse_pd("PD[]"), Err(KhovanovError::Parse(_))));
        assert!(matches!(parse_pd("PD[X[1,2,3]]"), Err(KhovanovError::Parse(_))));
        assert!(matches!(parse_pd("X[1,2,3,4]"), Err(KhovanovError::Parse(_))));
    }

    #[test]
    fn crossingless_circles() {
        let d = parse_pd("PD[] circles=2").unwrap();
        assert_eq!(d.resolve(0).k(), 2);
        assert_eq!(d.crossing_count(), 0);
    }

    #[test]
    fn trefoil_circle_counts() {
        let d = parse_pd(TREFOIL).unwrap();
        let counts: Vec<usize> = (0..8).map(|a| d.resolve(a).k()).collect();
        assert!(counts.iter().all(|k| (1..=3).contains(k)));
        assert_eq!(counts.iter().filter(|&&k| k == 3).count(), 1);
    }

    #[test]
    fn partial_resolution_closes_circles() {
        let d = parse_pd("PD[X[1,1,2,2]]").unwrap();
        let zero = d.partial_resolution(&[0], 0);
        assert_eq!((zero.crossing_count(), zero.free_circles()), (0, 2));
        let t = parse_pd(TREFOIL).unwrap();
        let p = t.partial_resolution(&[1], 0);
        assert_eq!(p.crossing_count(), 2);
        for a in 0..4u64 {
            // resolving the rest of the way gives the same circles as resolving at once
            let full = (a & 1) | (a >> 1 & 1) << 2;
            assert_eq!(p.resolve(a).k(), t.resolve(full).k());
        }
    }
}
