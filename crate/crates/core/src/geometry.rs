//! Point clouds and minimum enclosing balls.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Slack on radius comparisons; ties resolve toward inclusion.
pub const RADIUS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Distribution {
    UniformCube,
    StandardGaussian,
}

impl FromStr for Distribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-cube" => Ok(Distribution::UniformCube),
            "gaussian" | "standard-gaussian" => Ok(Distribution::StandardGaussian),
            _ => Err(Error::domain(format!(
                "unknown point distribution {s:?}; expected uniform-cube or standard-gaussian"
            ))),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::UniformCube => "uniform-cube",
            Distribution::StandardGaussian => "standard-gaussian",
        })
    }
}

/// `n` points in R^dim, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    pub coords: Vec<f64>,
    pub distribution: Option<Distribution>,
}

impl PointCloud {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::malformed("rows of unequal length"));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::malformed("non-finite coordinate"));
        }
        Ok(PointCloud { dim, coords: rows.concat(), distribution: None })
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn dist2(&self, i: usize, j: usize) -> f64 {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist2(i, j).sqrt()
    }

    /// Same cloud with every coordinate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> PointCloud {
        PointCloud { coords: self.coords.iter().map(|x| x * s).collect(), ..self.clone() }
    }

    /// One point per line, comma separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            let row: Vec<String> = self.point(i).iter().map(|x| format!("{x}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| Error::malformed(format!("bad coordinate {t:?}"))))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

/// `n` i.i.d. points from the named distribution.
pub fn gen_points(n: usize, dim: usize, distribution: Distribution, seed: RngSeed) -> Result<PointCloud> {
    if n == 0 || dim == 0 {
        return Err(Error::domain("point clouds need n ≥ 1 and d ≥ 1"));
    }
    let mut rng = seed.rng(0x9017);
    let coords = match distribution {
        Distribution::UniformCube => (0..n * dim).map(|_| rng.gen::<f64>()).collect(),
        Distribution::StandardGaussian => (0..n * dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
    };
    Ok(PointCloud { dim, coords, distribution: Some(distribution) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        let d2: f64 = self.center.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
        d2.sqrt() <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Smallest ball through all points of `support` (their circumball in
/// their affine hull). `None` if the support is affinely dependent.
fn circumball(pts: &[&[f64]]) -> Option<Ball> {
    let dim = pts[0].len();
    let p0 = pts[0];
    let m = pts.len() - 1;
    if m == 0 {
        return Some(Ball { center: p0.to_vec(), radius: 0.0 });
    }
    let v: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // Gram system 2 G λ = diag(G)
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = (0..m).map(|j| 2.0 * dot(&v[i], &v[j])).collect();
            row.push(dot(&v[i], &v[i]));
            row
        })
        .collect();
    let scale = a.iter().map(|r| r[m].abs()).fold(0.0, f64::max).max(1e-300);
    for c in 0..m {
        let piv = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[piv][c].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(c, piv);
        for r in 0..m {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=m {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    let lambda: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
    let mut center = p0.to_vec();
    for (l, vi) in lambda.iter().zip(&v) {
        for k in 0..dim {
            center[k] += l * vi[k];
        }
    }
    let radius = dot(
        &center.iter().zip(p0).map(|(a, b)| a - b).collect::<Vec<_>>(),
        &center.iter().zip(p0).map(|(a, b)| a - b).collect::<Vec<_>>(),
    )
    .sqrt();
    Some(Ball { center, radius })
}

/// Minimum enclosing ball of the given points (Welzl's move-to-front
/// recursion).
pub fn min_enclosing_ball(points: &[&[f64]]) -> Ball {
    assert!(!points.is_empty());
    let mut order: Vec<&[f64]> = points.to_vec();
    let mut support: Vec<&[f64]> = Vec::new();
    welzl(&mut order, points.len(), &mut support)
}

fn welzl<'a>(pts: &mut Vec<&'a [f64]>, n: usize, support: &mut Vec<&'a [f64]>) -> Ball {
    let dim = pts.first().or(support.first()).map(|p| p.len()).unwrap_or(0);
    let mut ball = if support.is_empty() {
        Ball { center: pts[0].to_vec(), radius: 0.0 }
    } else {
        circumball(support).unwrap_or_else(|| fallback_ball(support))
    };
    if support.len() == dim + 1 {
        return ball;
    }
    let mut i = 0;
    while i < n {
        let p = pts[i];
        if !ball.contains(p) {
            support.push(p);
            ball = welzl(pts, i, support);
            support.pop();
            // move to front
            let q = pts.remove(i);
            pts.insert(0, q);
        }
        i += 1;
    }
    ball
}

/// Ball on the farthest pair, used when a support set degenerates.
fn fallback_ball(pts: &[&[f64]]) -> Ball {
    let mut best = (0, 0, 0.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d: f64 = pts[i].iter().zip(pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let center = pts[best.0].iter().zip(pts[best.1]).map(|(a, b)| 0.5 * (a + b)).collect();
    Ball { center, radius: 0.5 * best.2.sqrt() }
}

/// Radius of the minimum enclosing ball of the indexed cloud points.
pub fn enclosing_radius(cloud: &PointCloud, idx: &[u32]) -> f64 {
    match idx.len() {
        0 | 1 => 0.0,
        2 => 0.5 * cloud.dist(idx[0] as usize, idx[1] as usize),
        _ => {
            let pts: Vec<&[f64]> = idx.iter().map(|&i| cloud.point(i as usize)).collect();
            min_enclosing_ball(&pts).radius
        }
    }
}
