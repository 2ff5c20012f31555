//! Shared fixtures and assertions for the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use proxreg::geo_graph::{Centroid, ProximityMatrix, RegionAttr, RegionAttributes, RegionIndex, WeightKind};

pub fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("r{i:03}")).collect()
}

/// Attributes for regions `ids` with the given states, populations and (lat, lon).
pub fn attrs(ids: &[String], states: &[&str], pops: &[f64], coords: &[(f64, f64)]) -> RegionAttributes {
    let mut a = RegionAttributes::new();
    for i in 0..ids.len() {
        a.insert(
            ids[i].clone(),
            RegionAttr {
                state: states[i].to_string(),
                population: pops[i],
                centroid: Centroid::new(coords[i].0, coords[i].1).unwrap(),
            },
        )
        .unwrap();
    }
    a
}

pub fn matrix<const N: usize>(rows: &[[f64; N]]) -> Vec<f64> {
    rows.iter().flat_map(|r| r.iter().copied()).collect()
}

pub fn proximity<const N: usize>(rows: &[[f64; N]], kind: WeightKind) -> ProximityMatrix {
    let index = RegionIndex::new(ids(rows.len())).unwrap();
    ProximityMatrix::from_row_major(index, matrix(rows), kind).unwrap()
}

pub fn dmatrix<const N: usize>(rows: &[[f64; N]]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows.len(), N, &matrix(rows))
}

#[track_caller]
pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:e}, want {want:e}, |diff| {:e} > {tol:e}",
        (got - want).abs()
    );
}

#[track_caller]
pub fn assert_all_close(got: &[f64], want: &[f64], tol: f64, what: &str) {
    assert_eq!(got.len(), want.len(), "{what}: length");
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert_close(*g, *w, tol, &format!("{what}[{i}]"));
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}
