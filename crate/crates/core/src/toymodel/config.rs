use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphs::{Edge, Label, LabelledGraph};

/// A point of the grid `U = (R × Z) ∪ (Z × R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    pub x: Rational64,
    pub y: Rational64,
}

impl GridPoint {
    pub fn new(x: Rational64, y: Rational64) -> Result<Self> {
        if !x.is_integer() && !y.is_integer() {
            return Err(Error::InvalidInput(format!("({x}, {y}) is not on a grid line")));
        }
        Ok(GridPoint { x, y })
    }

    pub fn lattice(x: i64, y: i64) -> Self {
        GridPoint { x: Rational64::from_integer(x), y: Rational64::from_integer(y) }
    }

    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Self {
        GridPoint { x: self.x + dx, y: self.y + dy }
    }

    /// Where the point lands on the rank-2 rose.
    fn site(&self) -> Site {
        if self.is_lattice() {
            Site::Base
        } else if self.y.is_integer() {
            Site::Horizontal(self.x.fract_pos())
        } else {
            Site::Vertical(self.y.fract_pos())
        }
    }

    /// Lattice point reached by sliding down or left along the point's line.
    fn anchor(&self) -> GridPoint {
        if self.y.is_integer() {
            GridPoint { x: self.x.floor(), y: self.y }
        } else {
            GridPoint { x: self.x, y: self.y.floor() }
        }
    }
}

impl Serialize for GridPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.x.to_string(), self.y.to_string()).serialize(s)
    }
}

trait FractPos {
    fn fract_pos(&self) -> Rational64;
}

impl FractPos for Rational64 {
    fn fract_pos(&self) -> Rational64 {
        self - self.floor()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Site {
    Base,
    Horizontal(Rational64),
    Vertical(Rational64),
}

/// `n − 2` pairs `(z_i, z_i′)` of grid points, `i = 3..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToyConfiguration {
    rank: usize,
    pairs: Vec<(GridPoint, GridPoint)>,
}

impl ToyConfiguration {
    pub fn new(rank: usize, pairs: Vec<(GridPoint, GridPoint)>) -> Result<Self> {
        if rank < 3 || pairs.len() != rank - 2 {
            return Err(Error::InvalidInput(format!(
                "rank {rank} needs {} pairs, got {}",
                rank.saturating_sub(2),
                pairs.len()
            )));
        }
        for (z, w) in &pairs {
            GridPoint::new(z.x, z.y)?;
            GridPoint::new(w.x, w.y)?;
        }
        Ok(ToyConfiguration { rank, pairs })
    }

    /// Every `z_i` at the origin and `z_i′` at `(p_i, q_i)`.
    pub fn corner(rank: usize, offsets: &[(i64, i64)]) -> Result<Self> {
        let pairs = offsets.iter().map(|&(p, q)| (GridPoint::lattice(0, 0), GridPoint::lattice(p, q))).collect();
        Self::new(rank, pairs)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pairs(&self) -> &[(GridPoint, GridPoint)] {
        &self.pairs
    }

    pub fn translate_pair(&self, i: usize, dx: i64, dy: i64) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        let (z, w) = pairs.get_mut(i).ok_or_else(|| Error::InvalidInput(format!("no pair {i}")))?;
        *z = z.translate(dx, dy);
        *w = w.translate(dx, dy);
        Ok(ToyConfiguration { rank: self.rank, pairs })
    }

    /// Translate each pair so that `z_i` lies in `[0,1)²`.
    pub fn normalized(&self) -> Self {
        let pairs = self
            .pairs
            .iter()
            .map(|(z, w)| {
                let (dx, dy) = (-z.x.floor().to_integer(), -z.y.floor().to_integer());
                (z.translate(dx, dy), w.translate(dx, dy))
            })
            .collect();
        ToyConfiguration { rank: self.rank, pairs }
    }

    pub fn is_normalized(&self) -> bool {
        let unit = |r: Rational64| r >= Rational64::zero() && r < Rational64::one();
        self.pairs.iter().all(|(z, _)| unit(z.x) && unit(z.y))
    }
}

/// Segments along grid lines from `from` to `to`: slide to a lattice point,
/// go horizontally then vertically, slide out.
fn grid_path(from: &GridPoint, to: &GridPoint) -> Vec<(GridPoint, GridPoint)> {
    let a = from.anchor();
    let b = to.anchor();
    let corner = GridPoint { x: b.x, y: a.y };
    let mut segs = vec![(*from, a), (a, corner), (corner, b), (b, *to)];
    segs.retain(|(p, q)| p != q);
    segs
}

/// Signed number of times `lo..hi` (traversed from `a` to `b`) covers a
/// lift of the arc `[s, t]` of `R/Z`.
fn coverings(a: Rational64, b: Rational64, s: Rational64, t: Rational64) -> i64 {
    let (lo, hi, sign) = if a <= b { (a, b, 1) } else { (b, a, -1) };
    let first = (lo - s).ceil().to_integer();
    let last = (hi - t).floor().to_integer();
    sign * (last - first + 1).max(0)
}

fn unit(n: usize, i: usize) -> Label {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Rank-2 rose on the `x1`, `x2` circles subdivided at every configuration
/// point, plus an edge `a_i` from `z_i′` to `z_i` labelled `e_i`. An arc of
/// the `x_j` circle is labelled `e_j` plus, for each pair, the signed
/// number of times the grid path from `z_i` to `z_i′` runs over it.
pub fn config_to_graph(c: &ToyConfiguration) -> Result<LabelledGraph> {
    graph_with_paths(c, grid_path)
}

fn graph_with_paths(
    c: &ToyConfiguration,
    path: fn(&GridPoint, &GridPoint) -> Vec<(GridPoint, GridPoint)>,
) -> Result<LabelledGraph> {
    let n = c.rank;
    let mut hs: BTreeSet<Rational64> = BTreeSet::from([Rational64::zero()]);
    let mut vs: BTreeSet<Rational64> = BTreeSet::from([Rational64::zero()]);
    for (z, w) in &c.pairs {
        for p in [z, w] {
            match p.site() {
                Site::Horizontal(s) => {
                    hs.insert(s);
                }
                Site::Vertical(s) => {
                    vs.insert(s);
                }
                Site::Base => {}
            }
        }
    }
    let hs: Vec<Rational64> = hs.into_iter().collect();
    let vs: Vec<Rational64> = vs.into_iter().collect();
    let vertex = |site: Site| -> usize {
        match site {
            Site::Base => 0,
            Site::Horizontal(s) => hs.iter().position(|&x| x == s).expect("site recorded"),
            Site::Vertical(s) => hs.len() - 1 + vs.iter().position(|&x| x == s).expect("site recorded"),
        }
    };
    let num_vertices = hs.len() + vs.len() - 1;
    let paths: Vec<Vec<(GridPoint, GridPoint)>> = c.pairs.iter().map(|(z, w)| path(z, w)).collect();
    let mut edges = Vec::new();
    for (dir, pts) in [(0usize, &hs), (1, &vs)] {
        for j in 0..pts.len() {
            let s = pts[j];
            let t = pts.get(j + 1).copied().unwrap_or_else(Rational64::one);
            let mut label = unit(n, dir);
            for (i, path) in paths.iter().enumerate() {
                let mut count = 0i64;
                for (p, q) in path {
                    let along = if dir == 0 { p.y == q.y && p.x != q.x } else { p.x == q.x && p.y != q.y };
                    if along {
                        count += if dir == 0 { coverings(p.x, q.x, s, t) } else { coverings(p.y, q.y, s, t) };
                    }
                }
                label[i + 2] = count;
            }
            let site = |r: Rational64| {
                if r.is_zero() || r.is_one() {
                    Site::Base
                } else if dir == 0 {
                    Site::Horizontal(r)
                } else {
                    Site::Vertical(r)
                }
            };
            edges.push(Edge::new(vertex(site(s)), vertex(site(t)), label));
        }
    }
    for (i, (z, w)) in c.pairs.iter().enumerate() {
        edges.push(Edge::new(vertex(w.site()), vertex(z.site()), unit(n, i + 2)));
    }
    LabelledGraph::new(n, num_vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{canonical_key, roses_whose_star_contains, validate};
    use crate::lattice::RoseCoset;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn corner_is_block_rose() {
        let c = ToyConfiguration::corner(3, &[(1, 1)]).unwrap();
        let g = config_to_graph(&c).unwrap();
        assert!(validate(&g).is_ok());
        assert_eq!(g.num_vertices(), 1);
        let roses = roses_whose_star_contains(&g).unwrap();
        let want = RoseCoset::from_i64(&[[1, 0, 1], [0, 1, 1], [0, 0, 1]]).unwrap();
        assert_eq!(roses.into_iter().collect::<Vec<_>>(), vec![want]);
    }

    #[test]
    fn three_vertex_example() {
        let z = GridPoint::new(r(1, 2), r(0, 1)).unwrap();
        let w = GridPoint::new(r(0, 1), r(1, 2)).unwrap();
        let c = ToyConfiguration::new(3, vec![(z, w)]).unwrap();
        let g = config_to_graph(&c).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert!(validate(&g).is_ok(), "{:?}", validate(&g));
    }

    #[test]
    fn translation_invariance() {
        let z = GridPoint::new(r(1, 3), r(0, 1)).unwrap();
        let w = GridPoint::new(r(2, 1), r(5, 4)).unwrap();
        let c = ToyConfiguration::new(3, vec![(z, w)]).unwrap();
        let k = canonical_key(&config_to_graph(&c).unwrap());
        assert_eq!(k, canonical_key(&config_to_graph(&c.translate_pair(0, 1, 0).unwrap()).unwrap()));
        assert_eq!(k, canonical_key(&config_to_graph(&c.translate_pair(0, -3, 2).unwrap()).unwrap()));
        assert!(c.translate_pair(0, 4, 4).unwrap().normalized().is_normalized());
    }

    /// Vertical-first, through a detour around an extra lattice square.
    fn other_path(from: &GridPoint, to: &GridPoint) -> Vec<(GridPoint, GridPoint)> {
        let a = from.anchor();
        let b = to.anchor();
        let up = a.translate(0, 1);
        let over = up.translate(1, 0);
        let back = over.translate(-1, 0).translate(0, -1);
        let corner = GridPoint { x: a.x, y: b.y };
        let mut segs =
            vec![(*from, a), (a, up), (up, over), (over, over.translate(0, -1)), (over.translate(0, -1), back)];
        segs.extend([(back, corner), (corner, b), (b, *to)]);
        segs.retain(|(p, q)| p != q);
        segs
    }

    #[test]
    fn labels_do_not_depend_on_path() {
        let z = GridPoint::new(r(1, 3), r(0, 1)).unwrap();
        let w = GridPoint::new(r(2, 1), r(-5, 4)).unwrap();
        let z4 = GridPoint::new(r(0, 1), r(2, 3)).unwrap();
        let w4 = GridPoint::new(r(-7, 2), r(3, 1)).unwrap();
        let c = ToyConfiguration::new(4, vec![(z, w), (z4, w4)]).unwrap();
        let g = config_to_graph(&c).unwrap();
        assert!(validate(&g).is_ok());
        assert_eq!(g, graph_with_paths(&c, other_path).unwrap());
    }

    #[test]
    fn off_grid_rejected() {
        assert!(GridPoint::new(r(1, 2), r(1, 2)).is_err());
    }
}
