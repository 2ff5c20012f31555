use std::io::Write;
use std::path::Path;

use indexmap::IndexMap;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::edges::SciEdgeList;
use super::region::{haversine_unchecked, Centroid, RegionAttributes, RegionIndex};
use crate::error::{Error, Result};
use crate::fmt::f64_17;
use crate::par;

/// Tolerance used when validating row sums of externally supplied matrices.
const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Social,
    Spatial,
    SpatialDecay,
    Aggregated,
}

impl WeightKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightKind::Social => "social",
            WeightKind::Spatial => "spatial",
            WeightKind::SpatialDecay => "spatial_decay",
            WeightKind::Aggregated => "aggregated",
        }
    }
}

/// Row-stochastic proximity matrix with a zero diagonal.
///
/// Stored row-major. Rows of isolated regions (no proximity mass) are all
/// zero and flagged in `isolated`.
#[derive(Debug, Clone)]
pub struct ProximityMatrix {
    index: RegionIndex,
    weights: Vec<f64>,
    kind: WeightKind,
    isolated: Vec<bool>,
    warnings: Vec<String>,
}

impl ProximityMatrix {
    /// Validate and wrap an existing row-major matrix.
    pub fn from_row_major(index: RegionIndex, weights: Vec<f64>, kind: WeightKind) -> Result<Self> {
        let n = index.len();
        if weights.len() != n * n {
            return Err(Error::dim(format!(
                "weight buffer has {} entries, expected {n}x{n}",
                weights.len()
            )));
        }
        let mut isolated = vec![false; n];
        for i in 0..n {
            let row = &weights[i * n..(i + 1) * n];
            if row[i] != 0.0 {
                return Err(Error::input(format!("nonzero diagonal at '{}'", index.id(i))));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::input(format!(
                    "row '{}' has an invalid weight {v}",
                    index.id(i)
                )));
            }
            let s: f64 = row.iter().sum();
            if s == 0.0 {
                isolated[i] = true;
            } else if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::input(format!(
                    "row '{}' sums to {s}, not 1",
                    index.id(i)
                )));
            }
        }
        let warnings = isolated_warnings(&index, &isolated);
        Ok(Self {
            index,
            weights,
            kind,
            isolated,
            warnings,
        })
    }

    /// Row-normalize a nonnegative kernel (diagonal ignored) into a proximity matrix.
    pub(crate) fn from_kernel(index: RegionIndex, mut kernel: Vec<f64>, kind: WeightKind) -> Self {
        let n = index.len();
        let flags: Vec<bool> = {
            par::for_each_row(&mut kernel, n, |i, row| {
                row[i] = 0.0;
                let denom: f64 = row.iter().sum();
                if denom > 0.0 {
                    row.iter_mut().for_each(|v| *v /= denom);
                } else {
                    row.iter_mut().for_each(|v| *v = 0.0);
                }
            });
            (0..n)
                .map(|i| kernel[i * n..(i + 1) * n].iter().all(|v| *v == 0.0))
                .collect()
        };
        let warnings = isolated_warnings(&index, &flags);
        Self {
            index,
            weights: kernel,
            kind,
            isolated: flags,
            warnings,
        }
    }

    pub fn index(&self) -> &RegionIndex {
        &self.index
    }

    pub fn n(&self) -> usize {
        self.index.len()
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn isolated(&self) -> &[bool] {
        &self.isolated
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.weights
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n(), self.n(), &self.weights)
    }

    /// `W y`, summing each row left to right.
    pub fn mul_vec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n() {
            return Err(Error::dim(format!(
                "vector of length {} against {}x{} weights",
                y.len(),
                self.n(),
                self.n()
            )));
        }
        Ok(par::map_range(self.n(), |i| dot(self.row(i), y)))
    }

    /// `W X` for a column-major design block.
    pub fn mul_mat(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let n = self.n();
        if x.nrows() != n {
            return Err(Error::dim(format!(
                "matrix with {} rows against {n}x{n} weights",
                x.nrows()
            )));
        }
        let k = x.ncols();
        let rows: Vec<Vec<f64>> = par::map_range(n, |i| {
            let r = self.row(i);
            (0..k).map(|c| dot(r, x.column(c).as_slice())).collect()
        });
        Ok(DMatrix::from_fn(n, k, |i, c| rows[i][c]))
    }

    /// Restrict to the rows/columns where `keep` is true and re-normalize rows.
    pub fn restrict(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.n() {
            return Err(Error::dim("keep mask length differs from matrix size"));
        }
        let kept: Vec<usize> = (0..self.n()).filter(|&i| keep[i]).collect();
        let index = RegionIndex::new(kept.iter().map(|&i| self.index.id(i).to_string()))?;
        let m = kept.len();
        let mut kernel = vec![0.0; m * m];
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                kernel[a * m + b] = self.get(i, j);
            }
        }
        Ok(Self::from_kernel(index, kernel, self.kind))
    }

    /// CSV with a header of region ids and one row per region.
    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["region_id".to_string()];
        header.extend(self.index.ids().map(str::to_string));
        w.write_record(&header)?;
        for i in 0..self.n() {
            let mut rec = Vec::with_capacity(self.n() + 1);
            rec.push(self.index.id(i).to_string());
            rec.extend(self.row(i).iter().map(|v| f64_17(*v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.to_writer(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

fn isolated_warnings(index: &RegionIndex, isolated: &[bool]) -> Vec<String> {
    isolated
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| format!("region '{}' is isolated (zero proximity mass)", index.id(i)))
        .collect()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `w_ij = n_j SCI_ij / sum_{k != i} n_k SCI_ik`.
///
/// Pairs missing from `edges` count as zero. Self-pairs and ids outside
/// `index` are ignored. Both orientations of a pair may be present only if
/// they carry the same SCI.
pub fn build_social_weights(
    edges: &SciEdgeList,
    attrs: &RegionAttributes,
    index: &RegionIndex,
) -> Result<ProximityMatrix> {
    let n = index.len();
    let pops: Vec<f64> = attrs.aligned(index)?.iter().map(|a| a.population).collect();
    let slot_pos: Vec<Option<usize>> = edges.ids().iter().map(|id| index.position(id)).collect();

    let mut sci = vec![f64::NAN; n * n];
    for &(a, b, s) in edges.raw() {
        let (Some(i), Some(j)) = (slot_pos[a as usize], slot_pos[b as usize]) else {
            continue;
        };
        if i == j {
            continue;
        }
        let prev = sci[i * n + j];
        if prev.is_nan() {
            sci[i * n + j] = s;
            sci[j * n + i] = s;
        } else if prev != s {
            return Err(Error::ConflictingEdge {
                a: index.id(i.min(j)).to_string(),
                b: index.id(i.max(j)).to_string(),
                first: prev,
                second: s,
            });
        }
    }

    par::for_each_row(&mut sci, n, |_, row| {
        for (v, p) in row.iter_mut().zip(&pops) {
            *v = if v.is_nan() { 0.0 } else { *v * p };
        }
    });
    Ok(ProximityMatrix::from_kernel(index.clone(), sci, WeightKind::Social))
}

/// `a_ij = (1 + 1/d_ij) / sum_{k != i} (1 + 1/d_ik)`, distances in km.
pub fn build_spatial_weights(attrs: &RegionAttributes, index: &RegionIndex) -> Result<ProximityMatrix> {
    distance_weights(attrs, index, WeightKind::Spatial, |d| 1.0 + 1.0 / d)
}

/// Slow-decay variant `(1 + d_ij^-p) / sum_{k != i} (1 + d_ik^-p)`.
pub fn build_decay_weights(
    attrs: &RegionAttributes,
    index: &RegionIndex,
    exponent: f64,
) -> Result<ProximityMatrix> {
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(Error::input(format!(
            "decay exponent must be positive, got {exponent}"
        )));
    }
    distance_weights(attrs, index, WeightKind::SpatialDecay, move |d| {
        1.0 + d.powf(-exponent)
    })
}

fn distance_weights<K>(
    attrs: &RegionAttributes,
    index: &RegionIndex,
    kind: WeightKind,
    kernel: K,
) -> Result<ProximityMatrix>
where
    K: Fn(f64) -> f64 + Sync + Send,
{
    let centroids: Vec<Centroid> = attrs.aligned(index)?.iter().map(|a| a.centroid).collect();
    distance_kernel_matrix(index, &centroids, kind, kernel)
}

fn distance_kernel_matrix<K>(
    index: &RegionIndex,
    centroids: &[Centroid],
    kind: WeightKind,
    kernel: K,
) -> Result<ProximityMatrix>
where
    K: Fn(f64) -> f64 + Sync + Send,
{
    let n = centroids.len();
    let mut buf = vec![0.0; n * n];
    par::for_each_row(&mut buf, n, |i, row| {
        for (j, v) in row.iter_mut().enumerate() {
            if j != i {
                let d = haversine_unchecked(centroids[i], centroids[j]);
                // zero distance is reported after the fill
                *v = if d > 0.0 { kernel(d) } else { f64::NAN };
            }
        }
    });
    if let Some(pos) = buf.iter().position(|v| v.is_nan()) {
        let (i, j) = (pos / n, pos % n);
        return Err(Error::CoincidentCentroids {
            a: index.id(i).to_string(),
            b: index.id(j).to_string(),
        });
    }
    Ok(ProximityMatrix::from_kernel(index.clone(), buf, kind))
}

/// Collapse a region-level matrix to parent states:
/// `w_xz = sum_{i in x, j in z} w_ij / sum_{z' != x} sum_{i in x, j in z'} w_ij`.
///
/// States are ordered by first appearance in the matrix index.
pub fn aggregate_state_weights(m: &ProximityMatrix, attrs: &RegionAttributes) -> Result<ProximityMatrix> {
    if m.kind() == WeightKind::Aggregated {
        return Err(Error::input("matrix is already state-level"));
    }
    let (states, member_state) = state_membership(attrs, m.index())?;
    let s = states.len();
    let n = m.n();
    let mut mass = vec![0.0; s * s];
    for i in 0..n {
        let x = member_state[i];
        for (j, &w) in m.row(i).iter().enumerate() {
            mass[x * s + member_state[j]] += w;
        }
    }
    let index = RegionIndex::new(states)?;
    Ok(ProximityMatrix::from_kernel(index, mass, WeightKind::Aggregated))
}

fn state_membership(attrs: &RegionAttributes, index: &RegionIndex) -> Result<(Vec<String>, Vec<usize>)> {
    let mut states: IndexMap<String, ()> = IndexMap::new();
    let mut member = Vec::with_capacity(index.len());
    for a in attrs.aligned(index)? {
        let (pos, _) = states.insert_full(a.state.clone(), ());
        member.push(pos);
    }
    Ok((states.into_keys().collect(), member))
}

/// Population-weighted state centroids, averaged on the unit sphere.
pub fn state_centroids(attrs: &RegionAttributes, index: &RegionIndex) -> Result<(RegionIndex, Vec<Centroid>)> {
    let (states, member) = state_membership(attrs, index)?;
    let mut acc = vec![[0.0f64; 3]; states.len()];
    for (a, &x) in attrs.aligned(index)?.iter().zip(&member) {
        let (lat, lon) = (a.centroid.lat.to_radians(), a.centroid.lon.to_radians());
        let v = [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()];
        for c in 0..3 {
            acc[x][c] += a.population * v[c];
        }
    }
    let centroids = acc
        .iter()
        .map(|v| {
            let hyp = (v[0] * v[0] + v[1] * v[1]).sqrt();
            Centroid {
                lat: v[2].atan2(hyp).to_degrees(),
                lon: v[1].atan2(v[0]).to_degrees(),
            }
        })
        .collect();
    Ok((RegionIndex::new(states)?, centroids))
}

/// State-level spatial weights from population-weighted state centroids.
/// `exponent` selects the slow-decay kernel; `None` uses `1 + 1/d`.
pub fn build_state_spatial_weights(
    attrs: &RegionAttributes,
    index: &RegionIndex,
    exponent: Option<f64>,
) -> Result<ProximityMatrix> {
    let (states, centroids) = state_centroids(attrs, index)?;
    match exponent {
        None => distance_kernel_matrix(&states, &centroids, WeightKind::Aggregated, |d| 1.0 + 1.0 / d),
        Some(p) if p.is_finite() && p > 0.0 => {
            distance_kernel_matrix(&states, &centroids, WeightKind::Aggregated, move |d| 1.0 + d.powf(-p))
        }
        Some(p) => Err(Error::input(format!("decay exponent must be positive, got {p}"))),
    }
}
