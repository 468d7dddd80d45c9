use crate::color::unit_distance;
use crate::depth::{median, DepthMap};
use crate::error::{check_dims, Error, Result};

use super::cluster::{ClusterInfo, ClusterMap};

/// Relabels clusters by ascending median depth so that label `k` is rank
/// `k + 1`. Ties go to the larger cluster first, then to the earlier id.
pub fn order_by_depth(cm: &ClusterMap, depth: &DepthMap) -> Result<ClusterMap> {
    check_dims(cm.width, cm.height, depth.width, depth.height)?;
    if cm.is_empty() {
        return Err(Error::EmptyMap);
    }
    let mut samples: Vec<Vec<f64>> = cm.clusters.iter().map(|c| Vec::with_capacity(c.pixel_count)).collect();
    for (&l, &d) in cm.labels.iter().zip(&depth.values) {
        samples[l as usize].push(d);
    }
    let medians: Vec<f64> = samples.iter().map(|s| median(s).unwrap_or(f64::NEG_INFINITY)).collect();
    let mut order: Vec<usize> = (0..cm.len()).collect();
    order.sort_by(|&a, &b| {
        medians[a]
            .total_cmp(&medians[b])
            .then(cm.clusters[b].pixel_count.cmp(&cm.clusters[a].pixel_count))
            .then(a.cmp(&b))
    });
    let mut new_of = vec![0u32; cm.len()];
    for (rank0, &old) in order.iter().enumerate() {
        new_of[old] = rank0 as u32;
    }
    let clusters =
        order.iter().map(|&old| ClusterInfo { median_depth: Some(medians[old]), ..cm.clusters[old].clone() }).collect();
    Ok(ClusterMap {
        width: cm.width,
        height: cm.height,
        labels: cm.labels.iter().map(|&l| new_of[l as usize]).collect(),
        clusters,
        ordered: true,
    })
}

/// Merges rank-adjacent clusters whose mean colors are closer than `tau`,
/// repeating until no adjacent pair qualifies. A merged cluster takes the
/// pixel-weighted mean color and keeps the lower cluster's median depth.
pub fn merge_similar_layers(cm: &ClusterMap, tau: f64) -> Result<ClusterMap> {
    if !cm.ordered {
        return Err(Error::InvalidConfig("clusters must be ordered by depth before merging".into()));
    }
    // groups[k] lists the original ranks folded into merged cluster k.
    let mut groups: Vec<(ClusterInfo, Vec<u32>)> =
        cm.clusters.iter().enumerate().map(|(i, c)| (c.clone(), vec![i as u32])).collect();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < groups.len() {
            if unit_distance(groups[i].0.mean_color, groups[i + 1].0.mean_color) < tau {
                let (upper, members) = groups.remove(i + 1);
                let lower = &mut groups[i];
                let (na, nb) = (lower.0.pixel_count as f64, upper.pixel_count as f64);
                for k in 0..3 {
                    lower.0.mean_color[k] = (lower.0.mean_color[k] * na + upper.mean_color[k] * nb) / (na + nb);
                }
                lower.0.pixel_count += upper.pixel_count;
                lower.1.extend(members);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let mut new_of = vec![0u32; cm.len()];
    for (k, (_, members)) in groups.iter().enumerate() {
        for &m in members {
            new_of[m as usize] = k as u32;
        }
    }
    Ok(ClusterMap {
        width: cm.width,
        height: cm.height,
        labels: cm.labels.iter().map(|&l| new_of[l as usize]).collect(),
        clusters: groups.into_iter().map(|(c, _)| c).collect(),
        ordered: true,
    })
}
