use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::Serialize;

use super::config::{config_to_graph, GridPoint, ToyConfiguration};
use crate::error::{Error, Result};
use crate::graphs::{
    canonical_key, equal_up_to_sign, rose_rows, roses_whose_star_contains, validate, IdealEdge, LabelledGraph,
    UnionFind,
};
use crate::lattice::{IntMatrix, RoseCoset};
use crate::morse::{completely_descending_complex, homology, is_descending, CellComplexModel, HomologyGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TorusClass {
    pub p: i64,
    pub q: i64,
    pub rank: usize,
}

impl TorusClass {
    pub fn new(p: i64, q: i64, rank: usize) -> Result<Self> {
        if rank < 3 {
            return Err(Error::InvalidInput(format!("toy model needs rank at least 3, got {rank}")));
        }
        Ok(TorusClass { p, q, rank })
    }

    /// Corner of the square around `(p, q)` farthest from the origin; zero
    /// coordinates resolve to `+1`.
    pub fn far_corner(&self) -> (i64, i64) {
        let step = |x: i64| if x < 0 { x - 1 } else { x + 1 };
        (step(self.p), step(self.q))
    }
}

/// Block-matrix rose with every `p_i`, `q_i` at the far corner.
pub fn max_norm_rose(t: &TorusClass) -> Result<RoseCoset> {
    let n = t.rank;
    let (fx, fy) = t.far_corner();
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1;
    }
    rows[0][2..].fill(fx);
    rows[1][2..].fill(fy);
    RoseCoset::new(&IntMatrix::from_i64(&rows))
}

/// The block-matrix rose with columns `(p_i, q_i)`.
pub fn block_rose(n: usize, offsets: &[(i64, i64)]) -> Result<RoseCoset> {
    if offsets.len() + 2 != n {
        return Err(Error::InvalidInput(format!("rank {n} needs {} offsets", n.saturating_sub(2))));
    }
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1;
    }
    for (i, &(p, q)) in offsets.iter().enumerate() {
        rows[0][i + 2] = p;
        rows[1][i + 2] = q;
    }
    RoseCoset::new(&IntMatrix::from_i64(&rows))
}

/// Position on the boundary of a unit grid square: a corner `0..4` or the
/// interior of a side `0..4`. Corners run counter-clockwise from the lower
/// left; side `j` joins corner `j` to corner `j+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SquarePos {
    Corner(u8),
    Side(u8),
}

impl SquarePos {
    fn dim(&self) -> usize {
        match self {
            SquarePos::Corner(_) => 0,
            SquarePos::Side(_) => 1,
        }
    }

    fn faces(&self) -> Vec<SquarePos> {
        match *self {
            SquarePos::Corner(_) => Vec::new(),
            SquarePos::Side(j) => vec![SquarePos::Corner(j), SquarePos::Corner((j + 1) % 4)],
        }
    }

    fn all() -> Vec<SquarePos> {
        (0..4).map(SquarePos::Corner).chain((0..4).map(SquarePos::Side)).collect()
    }

    /// A point in this cell of the square with lower-left corner `(x, y)`,
    /// at fraction `at` along a side.
    fn point(&self, x: i64, y: i64, at: Rational64) -> GridPoint {
        let corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)];
        match *self {
            SquarePos::Corner(j) => GridPoint::lattice(corners[j as usize].0, corners[j as usize].1),
            SquarePos::Side(j) => {
                let a = corners[j as usize];
                let b = corners[(j as usize + 1) % 4];
                let lerp = |u: i64, v: i64| Rational64::from_integer(u) + at * (v - u);
                GridPoint { x: lerp(a.0, b.0), y: lerp(a.1, b.1) }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusCell {
    pub z: SquarePos,
    pub z_prime: SquarePos,
    pub dim: usize,
    pub boundary: Vec<usize>,
    pub graph_key: String,
    pub valid: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusCells {
    pub torus: TorusClass,
    pub cells: Vec<TorusCell>,
}

impl TorusCells {
    pub fn f_vector(&self) -> [usize; 3] {
        let mut f = [0; 3];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        let f = self.f_vector();
        f[0] as i64 - f[1] as i64 + f[2] as i64
    }

    /// Every 1-cell lies on exactly two 2-cells.
    pub fn is_closed_surface(&self) -> bool {
        let mut uses = vec![0usize; self.cells.len()];
        for c in self.cells.iter().filter(|c| c.dim == 2) {
            for &f in &c.boundary {
                uses[f] += 1;
            }
        }
        self.cells.iter().enumerate().filter(|(_, c)| c.dim == 1).all(|(i, _)| uses[i] == 2)
    }

    pub fn complex(&self) -> Result<CellComplexModel> {
        let dims: Vec<usize> = self.cells.iter().map(|c| c.dim).collect();
        let bd: Vec<Vec<usize>> = self.cells.iter().map(|c| c.boundary.clone()).collect();
        CellComplexModel::regular(&dims, &bd)
    }

    pub fn homology(&self) -> Result<Vec<HomologyGroup>> {
        homology(&self.complex()?)
    }
}

/// Product of the boundaries of the unit square at the origin (for `z`)
/// and the unit square at `(p, q)` (for `z′`), with a representative
/// graph per cell.
pub fn z_pq_cells(t: &TorusClass) -> Result<TorusCells> {
    if t.rank != 3 {
        return Err(Error::Unsupported(format!("torus cells are built in rank 3, got {}", t.rank)));
    }
    let positions = SquarePos::all();
    let mut index: BTreeMap<(SquarePos, SquarePos), usize> = BTreeMap::new();
    let mut order: Vec<(SquarePos, SquarePos)> = Vec::new();
    for a in &positions {
        for b in &positions {
            order.push((*a, *b));
        }
    }
    order.sort_by_key(|(a, b)| a.dim() + b.dim());
    for (i, k) in order.iter().enumerate() {
        index.insert(*k, i);
    }
    let quarter = Rational64::new(1, 4);
    let three_quarters = Rational64::new(3, 4);
    let mut cells = Vec::with_capacity(order.len());
    for &(a, b) in &order {
        let mut boundary: Vec<usize> = a.faces().into_iter().map(|f| index[&(f, b)]).collect();
        boundary.extend(b.faces().into_iter().map(|f| index[&(a, f)]));
        let z = a.point(0, 0, quarter);
        let w = b.point(t.p, t.q, three_quarters);
        let g = config_to_graph(&ToyConfiguration::new(3, vec![(z, w)])?)?;
        cells.push(TorusCell {
            z: a,
            z_prime: b,
            dim: a.dim() + b.dim(),
            boundary,
            graph_key: canonical_key(&g),
            valid: validate(&g).is_ok(),
        });
    }
    Ok(TorusCells { torus: *t, cells })
}

/// Coefficients `k` with `Σ k_i v_i = ±label`, if any.
fn ideal_coefficients(rows: &[Vec<i64>], label: &[i64]) -> Option<Vec<i8>> {
    let n = rows.len();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let k: Vec<i8> = (0..n)
            .map(|_| {
                let d = (c % 3) as i8 - 1;
                c /= 3;
                d
            })
            .collect();
        let s: Vec<i64> = (0..label.len()).map(|j| (0..n).map(|i| k[i] as i64 * rows[i][j]).sum()).collect();
        if s == label || s.iter().zip(label).all(|(a, b)| *a == -b) {
            return Some(k);
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct SpherePoint {
    pub z: GridPoint,
    pub z_prime: GridPoint,
    pub dim: usize,
    pub graph_key: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereReport {
    pub torus: TorusClass,
    pub rose: RoseCoset,
    pub cells: Vec<SpherePoint>,
    /// Number of 1-cells on the circle.
    pub length: usize,
    pub is_circle: bool,
    pub completely_descending: bool,
    pub in_cdlk: bool,
    pub loops_meet_once: bool,
    pub failures: Vec<String>,
}

impl SphereReport {
    pub fn passed(&self) -> bool {
        self.is_circle && self.completely_descending && self.in_cdlk && self.loops_meet_once
    }
}

/// Vertices shared by the `x1` and `x2` circles (edges whose label has a
/// nonzero first, respectively second, coordinate).
pub fn loop_intersection(g: &LabelledGraph) -> usize {
    let verts = |j: usize| -> BTreeSet<usize> {
        g.edges().iter().filter(|e| e.label[j] != 0).flat_map(|e| [e.src, e.dst]).collect()
    };
    verts(0).intersection(&verts(1)).count()
}

/// The link of the maximal-norm rose inside the torus: configurations
/// with `z` at or next to the origin on its square and `z′` at or next to
/// the far corner, not both at the corners. Each cell is represented by a
/// generic configuration.
pub fn sphere_intersection(t: &TorusClass) -> Result<SphereReport> {
    if t.rank != 3 {
        return Err(Error::Unsupported(format!("sphere certificates are built in rank 3, got {}", t.rank)));
    }
    let rho = max_norm_rose(t)?;
    let rows = rose_rows(&rho)?;
    let (fx, fy) = t.far_corner();
    let (sx, sy) = (fx - t.p, fy - t.q);
    let quarter = Rational64::new(1, 4);
    let r = Rational64::from_integer;
    let zs = [GridPoint { x: quarter * sx, y: r(0) }, GridPoint::lattice(0, 0), GridPoint { x: r(0), y: quarter * sy }];
    let ws = [
        GridPoint { x: r(fx), y: r(fy) - quarter * sy },
        GridPoint::lattice(fx, fy),
        GridPoint { x: r(fx) - quarter * sx, y: r(fy) },
    ];
    let mut cells = Vec::new();
    let mut grid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (1, 1) {
                grid.insert((i, j), cells.len());
                cells.push((i, j, usize::from(i != 1) + usize::from(j != 1) - 1));
            }
        }
    }
    let mut uf = UnionFind::new(cells.len());
    let mut degree = vec![0usize; cells.len()];
    for &(i, j, dim) in &cells {
        if dim == 1 {
            for v in [grid[&(1, j)], grid[&(i, 1)]] {
                degree[v] += 1;
                uf.union(grid[&(i, j)], v);
            }
        }
    }
    let length = cells.iter().filter(|c| c.2 == 1).count();
    let is_circle = uf.count() == 1 && cells.iter().zip(&degree).all(|(c, &d)| c.2 == 1 || d == 2);

    let cdlk = completely_descending_complex(&rho)?;
    let cdlk_dims: BTreeMap<&str, usize> = cdlk.cells.iter().map(|c| (c.key.as_str(), c.dim)).collect();
    let mut failures = Vec::new();
    let mut points = Vec::new();
    let (mut descending_ok, mut cdlk_ok, mut loops_ok) = (true, true, true);
    for &(i, j, dim) in &cells {
        let cfg = ToyConfiguration::new(3, vec![(zs[i], ws[j])])?;
        let g = config_to_graph(&cfg)?;
        let key = canonical_key(&g);
        if !roses_whose_star_contains(&g)?.contains(&rho) {
            descending_ok = false;
            failures.push(format!("cell ({i},{j}) is outside the star"));
        }
        let mut realized = 0;
        for e in g.edges() {
            if rows.iter().any(|v| equal_up_to_sign(v, &e.label)) {
                continue;
            }
            let ok = match ideal_coefficients(&rows, &e.label) {
                Some(k) => is_descending(&rho, &IdealEdge::new(&k)?)?,
                None => false,
            };
            if ok {
                realized += 1;
            } else {
                descending_ok = false;
                failures.push(format!("cell ({i},{j}) has a non-descending edge {:?}", e.label));
            }
        }
        if realized == 0 {
            descending_ok = false;
            failures.push(format!("cell ({i},{j}) realizes no descending ideal edge"));
        }
        if cdlk_dims.get(key.as_str()) != Some(&dim) {
            cdlk_ok = false;
            failures.push(format!("cell ({i},{j}) is not a {dim}-cell of the completely descending link"));
        }
        let meet = loop_intersection(&g);
        if meet != 1 {
            loops_ok = false;
            failures.push(format!("cell ({i},{j}): x1 and x2 circles meet {meet} times"));
        }
        points.push(SpherePoint { z: zs[i], z_prime: ws[j], dim, graph_key: key });
    }
    Ok(SphereReport {
        torus: *t,
        rose: rho,
        cells: points,
        length,
        is_circle,
        completely_descending: descending_ok,
        in_cdlk: cdlk_ok,
        loops_meet_once: loops_ok,
        failures,
    })
}

/// Index-1 and index-2 critical points of the pair-distance function in
/// rank 3 over a window: the horizontal 1-cell at `(0,0)` and one point per
/// other lattice point.
#[derive(Debug, Clone, Serialize)]
pub struct MorseCensus {
    pub index1: usize,
    pub index2: usize,
}

pub fn morse_census(window: &[(i64, i64)]) -> MorseCensus {
    let distinct: BTreeSet<(i64, i64)> = window.iter().copied().collect();
    let index1 = usize::from(distinct.contains(&(0, 0)));
    MorseCensus { index1, index2: distinct.len() - index1 }
}

/// All `(p, q)` with `|p|, |q| ≤ w`.
pub fn square_window(w: i64) -> Vec<(i64, i64)> {
    (-w..=w).flat_map(|p| (-w..=w).map(move |q| (p, q))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ToyCertificate {
    pub rank: usize,
    pub window: Vec<(i64, i64)>,
    pub roses: Vec<RoseCoset>,
    pub injective: bool,
    pub spheres: Vec<SphereReport>,
    pub census: MorseCensus,
    pub rank_certified: usize,
}

/// Independent top-degree classes certified over a window: distinct
/// maximal-norm roses, a passing sphere certificate per torus (computed in
/// rank 3), and a Morse census accounting for every class.
pub fn toy_certificate(n: usize, window: &[(i64, i64)]) -> Result<ToyCertificate> {
    let distinct: BTreeSet<(i64, i64)> = window.iter().copied().collect();
    if !distinct.contains(&(0, 0)) {
        return Err(Error::InvalidInput("window must contain (0,0)".into()));
    }
    let window: Vec<(i64, i64)> = distinct.into_iter().collect();
    let roses: Vec<RoseCoset> =
        window.iter().map(|&(p, q)| max_norm_rose(&TorusClass::new(p, q, n)?)).collect::<Result<_>>()?;
    let injective = roses.iter().collect::<BTreeSet<_>>().len() == roses.len();
    let spheres: Vec<SphereReport> =
        window.iter().map(|&(p, q)| sphere_intersection(&TorusClass::new(p, q, 3)?)).collect::<Result<_>>()?;
    let census = morse_census(&window);
    let all_pass =
        injective && spheres.iter().all(SphereReport::passed) && census.index1 + census.index2 == window.len();
    let rank_certified = if all_pass { window.len() } else { 0 };
    Ok(ToyCertificate { rank: n, window, roses, injective, spheres, census, rank_certified })
}

pub fn toy_homology_rank(n: usize, window: &[(i64, i64)]) -> Result<usize> {
    Ok(toy_certificate(n, window)?.rank_certified)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_rose_at_one_one() {
        let t = TorusClass::new(1, 1, 3).unwrap();
        let want = RoseCoset::from_i64(&[[1, 0, 2], [0, 1, 2], [0, 0, 1]]).unwrap();
        assert_eq!(max_norm_rose(&t).unwrap(), want);
    }

    #[test]
    fn torus_is_closed() {
        let c = z_pq_cells(&TorusClass::new(2, -1, 3).unwrap()).unwrap();
        assert_eq!(c.f_vector()[2], 16);
        assert_eq!(c.euler_characteristic(), 0);
        assert!(c.is_closed_surface());
    }

    #[test]
    fn spheres_match_under_translation() {
        let a = sphere_intersection(&TorusClass::new(1, 1, 3).unwrap()).unwrap();
        let b = sphere_intersection(&TorusClass::new(2, 1, 3).unwrap()).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert!(b.passed(), "{:?}", b.failures);
        assert_eq!(a.length, b.length);
    }

    #[test]
    fn mixed_ideal_edges_ascend() {
        for (p, q) in [(1, 1), (2, 1), (-1, 2)] {
            let t = TorusClass::new(p, q, 3).unwrap();
            let rho = max_norm_rose(&t).unwrap();
            let rows = rose_rows(&rho).unwrap();
            let (fx, fy) = t.far_corner();
            let find = |v: [i64; 3]| rows.iter().position(|r| equal_up_to_sign(r, &v)).unwrap();
            let (a, b) = (find([1, 0, fx]), find([0, 1, fy]));
            for e in IdealEdge::all(3) {
                if e.coeffs()[a] != 0 && e.coeffs()[b] != 0 {
                    assert!(!is_descending(&rho, &e).unwrap(), "{e:?} at ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn small_windows() {
        assert_eq!(toy_homology_rank(3, &[(0, 0)]).unwrap(), 1);
        assert_eq!(toy_homology_rank(3, &square_window(1)).unwrap(), 9);
        assert_eq!(toy_homology_rank(4, &square_window(1)).unwrap(), 9);
        assert!(toy_homology_rank(3, &[(1, 1)]).is_err());
    }
}
