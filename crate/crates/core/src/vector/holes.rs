use crate::error::{Error, Result};

use super::cluster::ClusterMap;

/// Full extent of layer `rank` (1-based) with occluded parts filled in.
///
/// Pixels of shallower layers (`rank' < rank`) stay outside the layer; pixels
/// of the layer itself stay inside. Each pixel of a deeper layer joins the
/// layer when its nearest pixel of rank `<= rank` (Euclidean, ties broken by
/// the smallest row-major index) belongs to the layer.
pub fn fill_holes(cm: &ClusterMap, rank: usize) -> Result<Vec<bool>> {
    let count = cm.len();
    if rank == 0 || rank > count {
        return Err(Error::RankOutOfRange { rank, count });
    }
    let own = (rank - 1) as u32;
    if cm.labels.iter().all(|&l| l <= own) {
        return Ok(cm.labels.iter().map(|&l| l == own).collect());
    }
    let nearest = nearest_site(cm.width as usize, cm.height as usize, |i| cm.labels[i] <= own);
    Ok(cm.labels.iter().zip(&nearest).map(|(&l, &s)| l == own || (l > own && cm.labels[s] == own)).collect())
}

#[inline]
fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// For every pixel, the row-major index of the nearest site under squared
/// Euclidean distance, ties going to the smaller index. Separable exact
/// transform: nearest site per column, then a lower envelope of parabolas per
/// row ordered lexicographically by `(distance, index)`. At least one site
/// must exist.
pub(crate) fn nearest_site(w: usize, h: usize, is_site: impl Fn(usize) -> bool) -> Vec<usize> {
    // Nearest site row within each column; ties go to the upper row, which
    // is also the smaller index.
    let mut col: Vec<Option<u32>> = vec![None; w * h];
    let mut above = vec![None; h];
    for x in 0..w {
        let mut last = None;
        for y in 0..h {
            if is_site(y * w + x) {
                last = Some(y);
            }
            above[y] = last;
        }
        let mut next: Option<usize> = None;
        for y in (0..h).rev() {
            if is_site(y * w + x) {
                next = Some(y);
            }
            col[y * w + x] = match (above[y], next) {
                (Some(a), Some(b)) => Some(if y - a <= b - y { a } else { b } as u32),
                (Some(a), None) => Some(a as u32),
                (None, Some(b)) => Some(b as u32),
                (None, None) => None,
            };
        }
    }

    struct Par {
        x: i64,
        g2: i64,
        idx: usize,
        start: i64,
    }
    let mut out = vec![0usize; w * h];
    let mut env: Vec<Par> = Vec::with_capacity(w);
    for y in 0..h {
        env.clear();
        for x in 0..w {
            let Some(r) = col[y * w + x] else { continue };
            let dy = y as i64 - i64::from(r);
            let new = Par { x: x as i64, g2: dy * dy, idx: r as usize * w + x, start: i64::MIN };
            loop {
                let Some(top) = env.last() else {
                    env.push(new);
                    break;
                };
                // f_new(t) - f_top(t) = c - d t with d > 0.
                let d = 2 * (new.x - top.x);
                let c = new.x * new.x - top.x * top.x + new.g2 - top.g2;
                let s = if new.idx < top.idx { -floor_div(-c, d) } else { floor_div(c, d) + 1 };
                if s <= top.start {
                    env.pop();
                    continue;
                }
                env.push(Par { start: s, ..new });
                break;
            }
        }
        let mut k = 0;
        for x in 0..w {
            while k + 1 < env.len() && env[k + 1].start <= x as i64 {
                k += 1;
            }
            out[y * w + x] = env[k].idx;
        }
    }
    out
}
