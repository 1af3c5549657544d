use std::collections::HashMap;

use super::Path;

/// Paths `i < j < k` and vertices `u`, `v` on all three with
/// `p_i[u:v] = p_k[u:v] != p_j[u:v]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathAlternation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub u: usize,
    pub v: usize,
}

/// Scans every ordered vertex pair; within the paths visiting both, an
/// alternation exists exactly when some subpath reappears after a different
/// one was seen.
pub fn check_alternation_free_paths(seq: &[Path]) -> Option<PathAlternation> {
    let width = seq
        .iter()
        .flat_map(|p| p.vertices.iter())
        .max()
        .map_or(0, |&m| m + 1);
    let positions: Vec<Vec<Option<usize>>> = seq
        .iter()
        .map(|p| {
            let mut pos = vec![None; width];
            for (i, &v) in p.vertices.iter().enumerate() {
                pos[v] = Some(i);
            }
            pos
        })
        .collect();
    let mut present = vec![false; width];
    for p in seq {
        for &v in &p.vertices {
            present[v] = true;
        }
    }
    let verts: Vec<usize> = (0..width).filter(|&v| present[v]).collect();

    let mut last_seen: HashMap<&[usize], usize> = HashMap::new();
    for &u in &verts {
        for &v in &verts {
            if u == v {
                continue;
            }
            last_seen.clear();
            let mut prev: Option<(&[usize], usize)> = None;
            for (idx, p) in seq.iter().enumerate() {
                let (Some(pu), Some(pv)) = (positions[idx][u], positions[idx][v]) else {
                    continue;
                };
                if pu >= pv {
                    continue;
                }
                let key = &p.edges[pu..pv];
                match prev {
                    Some((pk, _)) if pk == key => {}
                    Some((_, pidx)) => {
                        if let Some(&first) = last_seen.get(key) {
                            return Some(PathAlternation {
                                i: first,
                                j: pidx,
                                k: idx,
                                u,
                                v,
                            });
                        }
                    }
                    None => {}
                }
                last_seen.insert(key, idx);
                prev = Some((key, idx));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(vs: &[usize]) -> Path {
        // edge ids derived from the vertex pair so equal subpaths match
        let edges = vs.windows(2).map(|w| w[0] * 100 + w[1]).collect();
        Path {
            vertices: vs.to_vec(),
            edges,
        }
    }

    #[test]
    fn pqp_alternates() {
        let p = path(&[0, 1, 9]);
        let q = path(&[0, 2, 9]);
        let hit = check_alternation_free_paths(&[p.clone(), q, p]).unwrap();
        assert_eq!((hit.i, hit.j, hit.k), (0, 1, 2));
        assert_eq!((hit.u, hit.v), (0, 9));
    }

    #[test]
    fn disjoint_interiors_are_free() {
        let seq: Vec<Path> = (1..6).map(|m| path(&[0, m, 9])).collect();
        assert_eq!(check_alternation_free_paths(&seq), None);
    }

    #[test]
    fn paths_missing_a_vertex_are_ignored() {
        let a = path(&[0, 1, 2, 9]);
        let b = path(&[0, 3, 9]);
        let c = path(&[0, 1, 2, 9]);
        // a and c agree everywhere they share vertices with b
        assert!(check_alternation_free_paths(&[a.clone(), b, c]).is_some());
        let d = path(&[0, 1, 4, 9]);
        let hit = check_alternation_free_paths(&[a.clone(), d, a]).unwrap();
        assert_eq!((hit.i, hit.j, hit.k), (0, 1, 2));
    }
}
