use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::disc::AnalyticDisc;
use super::mobius::check_unimodular;
use crate::json::ComplexJson;
use crate::rif::RationalInnerFunction;
use crate::{unimodular, Error, Result, C64};

/// Points closer than this are considered equal.
const DISTINCT_TOL: f64 = 1e-12;

/// How the `N` base points on every disc are chosen.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum BasePoints {
    /// `j / (N + 1)` for `j = 1..N`.
    #[default]
    Default,
    /// The same points on every disc.
    Shared(Vec<C64>),
    /// One list per disc, disc-major.
    PerDisc(Vec<Vec<C64>>),
    /// Seeded random points with modulus in `[0.1, 0.8]`, one list per disc.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridConfig {
    /// Row `r − 2` holds `τ₁ʳ, …, τ_Nʳ`. Defaults to
    /// `exp(2πi((i−1)/N + (r−1)/(2Nn)))`.
    pub multipliers: Option<Vec<Vec<C64>>>,
    pub base_points: BasePoints,
}

/// The `N^n` nodes carried by the `N^{n−1}` flat discs built from every
/// combination of per-coordinate multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGrid {
    degree_bound: usize,
    dim: usize,
    tau_table: Vec<Vec<C64>>,
    /// For disc `k`, the index into each tau_table row.
    combos: Vec<Vec<usize>>,
    discs: Vec<AnalyticDisc>,
    base_points: Vec<Vec<C64>>,
    nodes: Vec<Vec<C64>>,
}

pub fn default_multipliers(big_n: usize, n: usize) -> Vec<Vec<C64>> {
    (2..=n)
        .map(|r| {
            (1..=big_n)
                .map(|i| {
                    let frac = (i - 1) as f64 / big_n as f64 + (r - 1) as f64 / (2.0 * (big_n * n) as f64);
                    unimodular(TAU * frac)
                })
                .collect()
        })
        .collect()
}

fn check_pairwise_distinct(points: &[C64], what: &str) -> Result<()> {
    for i in 0..points.len() {
        for j in 0..i {
            if (points[i] - points[j]).norm() < DISTINCT_TOL {
                return Err(Error::arg(format!("{what} must be pairwise distinct (entries {j} and {i})")));
            }
        }
    }
    Ok(())
}

fn random_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(count);
    while out.len() < count {
        let z = unimodular(rng.random_range(0.0..TAU)) * rng.random_range(0.1..0.8);
        if out.iter().all(|w| (w - z).norm() > 1e-3) {
            out.push(z);
        }
    }
    out
}

/// Builds the node lattice for degree bound `N` (strict) in dimension `n`.
pub fn generate_nodes(big_n: usize, n: usize, config: &GridConfig) -> Result<NodeGrid> {
    if big_n == 0 || n == 0 {
        return Err(Error::arg("N and n must be positive"));
    }
    let tau_table = match &config.multipliers {
        Some(t) => t.clone(),
        None => default_multipliers(big_n, n),
    };
    let m = big_n.checked_pow((n - 1) as u32).ok_or_else(|| Error::arg("N^(n-1) overflows"))?;
    let base_points = match &config.base_points {
        BasePoints::Default => {
            let row: Vec<C64> = (1..=big_n).map(|j| C64::new(j as f64 / (big_n + 1) as f64, 0.0)).collect();
            vec![row; m]
        }
        BasePoints::Shared(row) => vec![row.clone(); m],
        BasePoints::PerDisc(rows) => rows.clone(),
        BasePoints::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..m).map(|_| random_points(&mut rng, big_n)).collect()
        }
    };
    NodeGrid::from_parts(big_n, n, tau_table, base_points)
}

impl NodeGrid {
    /// Assembles and validates a grid from its multiplier table and base
    /// points; discs and nodes are derived.
    pub fn from_parts(big_n: usize, n: usize, tau_table: Vec<Vec<C64>>, base_points: Vec<Vec<C64>>) -> Result<Self> {
        if big_n == 0 || n == 0 {
            return Err(Error::arg("N and n must be positive"));
        }
        if tau_table.len() != n - 1 {
            return Err(Error::Dimension { expected: n - 1, got: tau_table.len() });
        }
        for (r, row) in tau_table.iter().enumerate() {
            if row.len() != big_n {
                return Err(Error::arg(format!("multiplier row {} has {} entries, expected {big_n}", r + 2, row.len())));
            }
            for t in row {
                check_unimodular(*t, &format!("multiplier in row {}", r + 2))?;
            }
            check_pairwise_distinct(row, &format!("multipliers in row {}", r + 2))?;
        }
        let m = big_n.pow((n - 1) as u32);
        if base_points.len() != m {
            return Err(Error::arg(format!("expected base points for {m} discs, got {}", base_points.len())));
        }
        for (k, row) in base_points.iter().enumerate() {
            if row.len() != big_n {
                return Err(Error::arg(format!("disc {k} has {} base points, expected {big_n}", row.len())));
            }
            if let Some(z) = row.iter().find(|z| !(z.norm() < 1.0)) {
                return Err(Error::arg(format!("base point {z} on disc {k} is not in the open disc")));
            }
            check_pairwise_distinct(row, &format!("base points on disc {k}"))?;
        }

        // disc k enumerates (i₂, …, iₙ) with i₂ most significant
        let combos: Vec<Vec<usize>> = (0..m)
            .map(|mut k| {
                let mut idx = vec![0; n - 1];
                for slot in idx.iter_mut().rev() {
                    *slot = k % big_n;
                    k /= big_n;
                }
                idx
            })
            .collect();
        let discs: Vec<AnalyticDisc> = combos
            .iter()
            .map(|idx| AnalyticDisc::Flat { multipliers: idx.iter().enumerate().map(|(r, &i)| tau_table[r][i]).collect() })
            .collect();
        let nodes: Vec<Vec<C64>> = discs
            .iter()
            .zip(&base_points)
            .flat_map(|(d, row)| row.iter().map(move |&z| d.at(z)))
            .collect();
        for i in 0..nodes.len() {
            for j in 0..i {
                let dist = nodes[i].iter().zip(&nodes[j]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                if dist < DISTINCT_TOL {
                    return Err(Error::arg(format!("nodes {j} and {i} coincide")));
                }
            }
        }
        Ok(NodeGrid { degree_bound: big_n, dim: n, tau_table, combos, discs, base_points, nodes })
    }

    /// `N`, the strict degree bound.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau_table(&self) -> &[Vec<C64>] {
        &self.tau_table
    }

    pub fn discs(&self) -> &[AnalyticDisc] {
        &self.discs
    }

    /// Multiplier indices `(i₂, …, iₙ)` of disc `k`.
    pub fn combo(&self, k: usize) -> &[usize] {
        &self.combos[k]
    }

    pub fn base_points(&self) -> &[Vec<C64>] {
        &self.base_points
    }

    /// All nodes, disc-major and base-point-minor.
    pub fn nodes(&self) -> &[Vec<C64>] {
        &self.nodes
    }

    pub fn node(&self, disc: usize, point: usize) -> &[C64] {
        &self.nodes[disc * self.degree_bound + point]
    }

    /// Smallest sup-norm distance between two nodes.
    pub fn min_node_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.nodes.len() {
            for j in 0..i {
                let d = self.nodes[i].iter().zip(&self.nodes[j]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                best = best.min(d);
            }
        }
        best
    }
}

/// Per-disc node counts `N_k = deg_{D_k}(f) + 1`.
pub fn refined_node_counts(f: &RationalInnerFunction, grid: &NodeGrid) -> Result<Vec<usize>> {
    if f.nvars() != grid.dim() {
        return Err(Error::Dimension { expected: grid.dim(), got: f.nvars() });
    }
    grid.discs().iter().map(|d| f.disc_degree(d).map(|k| k + 1)).collect()
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    #[serde(rename = "N")]
    big_n: usize,
    n: usize,
    tau_table: Vec<Vec<ComplexJson>>,
    base_points: Vec<Vec<ComplexJson>>,
    nodes: Vec<Vec<ComplexJson>>,
}

fn to_json_rows(rows: &[Vec<C64>]) -> Vec<Vec<ComplexJson>> {
    rows.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect()
}

fn from_json_rows(rows: Vec<Vec<ComplexJson>>) -> Vec<Vec<C64>> {
    rows.into_iter().map(|r| r.into_iter().map(Into::into).collect()).collect()
}

impl Serialize for NodeGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridJson {
            big_n: self.degree_bound,
            n: self.dim,
            tau_table: to_json_rows(&self.tau_table),
            base_points: to_json_rows(&self.base_points),
            nodes: to_json_rows(&self.nodes),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NodeGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = GridJson::deserialize(d)?;
        let stored = from_json_rows(raw.nodes);
        let grid = NodeGrid::from_parts(raw.big_n, raw.n, from_json_rows(raw.tau_table), from_json_rows(raw.base_points))
            .map_err(D::Error::custom)?;
        if stored.len() != grid.nodes.len() {
            return Err(D::Error::custom(format!("expected {} nodes, file has {}", grid.nodes.len(), stored.len())));
        }
        for (i, (a, b)) in grid.nodes.iter().zip(&stored).enumerate() {
            if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x - y).norm() > 1e-14) {
                return Err(D::Error::custom(format!("nodes[{i}] is not the image of its base point")));
            }
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn counts() {
        let g = generate_nodes(1, 2, &GridConfig::default()).unwrap();
        assert_eq!((g.discs().len(), g.nodes().len()), (1, 1));
        let g = generate_nodes(2, 2, &GridConfig::default()).unwrap();
        assert_eq!((g.discs().len(), g.nodes().len()), (2, 4));
        let g = generate_nodes(2, 3, &GridConfig::default()).unwrap();
        assert_eq!((g.discs().len(), g.nodes().len()), (4, 8));
        let g = generate_nodes(3, 1, &GridConfig::default()).unwrap();
        assert_eq!((g.discs().len(), g.nodes().len()), (1, 3));
    }

    #[test]
    fn cardinality_and_separation_up_to_four_by_three() {
        for big_n in 1..=4 {
            for n in 1..=3 {
                let g = generate_nodes(big_n, n, &GridConfig::default()).unwrap();
                assert_eq!(g.nodes().len(), big_n.pow(n as u32));
                assert_eq!(g.discs().len(), big_n.pow(n as u32 - 1));
                if g.nodes().len() > 1 {
                    assert!(g.min_node_distance() > 0.0);
                }
            }
        }
    }

    #[test]
    fn lifting_is_reproduced_by_disc_evaluation() {
        let g = generate_nodes(3, 3, &GridConfig::default()).unwrap();
        for (k, d) in g.discs().iter().enumerate() {
            for (j, &z) in g.base_points()[k].iter().enumerate() {
                assert_eq!(d.eval(&[z]).unwrap(), g.node(k, j));
            }
        }
    }

    #[test]
    fn default_multipliers_are_distinct_and_offset() {
        let t = default_multipliers(3, 3);
        assert_eq!(t.len(), 2);
        assert!((t[0][0] - unimodular(TAU / 18.0)).norm() < 1e-15);
        assert!((t[1][0] - unimodular(TAU * 2.0 / 18.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_repeated_inputs() {
        let cfg = GridConfig {
            multipliers: Some(vec![vec![c64(1.0, 0.0), c64(1.0, 0.0)]]),
            base_points: BasePoints::Default,
        };
        assert!(generate_nodes(2, 2, &cfg).is_err());
        let cfg = GridConfig { multipliers: None, base_points: BasePoints::Shared(vec![c64(0.2, 0.0), c64(0.2, 0.0)]) };
        assert!(generate_nodes(2, 2, &cfg).is_err());
    }

    #[test]
    fn random_points_are_seeded() {
        let cfg = GridConfig { multipliers: None, base_points: BasePoints::Random { seed: 5 } };
        let a = generate_nodes(3, 2, &cfg).unwrap();
        let b = generate_nodes(3, 2, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let g = generate_nodes(3, 2, &GridConfig::default()).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: NodeGrid = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);

        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["nodes"][0][1]["re"] = serde_json::json!(0.123);
        assert!(serde_json::from_value::<NodeGrid>(v).is_err());
    }
}
