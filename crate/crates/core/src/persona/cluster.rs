//! Two-cluster k-means over (pc_a, pc_g).
//!
//! Features are z-score standardized per dimension. Initialization picks the
//! two mutually farthest drivers, so results are deterministic; drivers are
//! processed in `driver_id` order, which makes them order-independent too.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Style;
use crate::analysis::DriverFeatures;
use crate::error::{Error, Result};

const MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub pc_a: f64,
    pub pc_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult {
    pub assignments: BTreeMap<String, Style>,
    /// Raw-feature centroids of the affected and the unaffected cluster.
    pub affected_centroid: Centroid,
    pub unaffected_centroid: Centroid,
    pub iterations: usize,
}

impl ClusterResult {
    pub fn style_of(&self, driver_id: &str) -> Option<Style> {
        self.assignments.get(driver_id).copied()
    }
}

fn standardize(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sd > 0.0 {
        values.iter().map(|v| (v - mean) / sd).collect()
    } else {
        vec![0.0; values.len()]
    }
}

fn d2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn mean_of(points: &[[f64; 2]], labels: &[usize], k: usize) -> Option<[f64; 2]> {
    let members: Vec<_> = points
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == k)
        .map(|(p, _)| *p)
        .collect();
    if members.is_empty() {
        return None;
    }
    let n = members.len() as f64;
    Some([
        members.iter().map(|p| p[0]).sum::<f64>() / n,
        members.iter().map(|p| p[1]).sum::<f64>() / n,
    ])
}

pub fn cluster_styles(features: &[DriverFeatures]) -> Result<ClusterResult> {
    if features.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "clustering needs at least 2 drivers, got {}",
            features.len()
        )));
    }
    for f in features {
        if !(f.pc_a.is_finite() && f.pc_g.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "driver {}: non-finite features",
                f.driver_id
            )));
        }
    }
    let mut sorted: Vec<&DriverFeatures> = features.iter().collect();
    sorted.sort_by(|a, b| a.driver_id.cmp(&b.driver_id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].driver_id == w[1].driver_id) {
        return Err(Error::InvalidInput(format!(
            "duplicate driver id {:?}",
            w[0].driver_id
        )));
    }

    let raw: Vec<[f64; 2]> = sorted.iter().map(|f| [f.pc_a, f.pc_g]).collect();
    let za = standardize(&raw.iter().map(|p| p[0]).collect::<Vec<_>>());
    let zg = standardize(&raw.iter().map(|p| p[1]).collect::<Vec<_>>());
    let z: Vec<[f64; 2]> = za.into_iter().zip(zg).map(|(a, g)| [a, g]).collect();

    let n = z.len();
    let mut best = (0, 1, -1.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = d2(z[i], z[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    if best.2 <= 0.0 {
        return Err(Error::DegenerateClustering);
    }
    let mut centers = [z[best.0], z[best.1]];
    let mut labels = vec![usize::MAX; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next: Vec<usize> = z
            .iter()
            .map(|&p| usize::from(d2(p, centers[1]) < d2(p, centers[0])))
            .collect();
        let changed = next != labels;
        labels = next;
        for (k, c) in centers.iter_mut().enumerate() {
            if let Some(m) = mean_of(&z, &labels, k) {
                *c = m;
            }
        }
        if !changed || iterations >= MAX_ITER {
            break;
        }
    }

    let raw_centers: Vec<Centroid> = (0..2)
        .map(|k| {
            let m = mean_of(&raw, &labels, k).unwrap_or([f64::NAN; 2]);
            Centroid {
                pc_a: m[0],
                pc_g: m[1],
            }
        })
        .collect();
    let first_affected = (raw_centers[0].pc_a, raw_centers[0].pc_g)
        > (raw_centers[1].pc_a, raw_centers[1].pc_g);
    let affected_k = if first_affected { 0 } else { 1 };

    let assignments = sorted
        .iter()
        .zip(&labels)
        .map(|(f, &l)| {
            let style = if l == affected_k {
                Style::Affected
            } else {
                Style::Unaffected
            };
            (f.driver_id.clone(), style)
        })
        .collect();
    Ok(ClusterResult {
        assignments,
        affected_centroid: raw_centers[affected_k],
        unaffected_centroid: raw_centers[1 - affected_k],
        iterations,
    })
}
