//! DBSCAN over coordinate pairs, Euclidean distance on raw degrees.
//!
//! A point is a core point when its eps-ball (inclusive of the point
//! itself) holds at least `min_pts` points. Clusters grow from core points;
//! non-core points inside a core point's ball join as border points;
//! everything else is noise. With `min_pts = 2` this reduces exactly to the
//! connected components of the graph with an edge between every pair of
//! points at distance <= eps, with singletons labeled noise.
//!
//! Output is deterministic: clusters are numbered by their smallest member
//! index, and expansion scans neighbors in index order.

/// Cluster labels, one per input point; `None` marks noise.
pub fn dbscan(points: &[(f64, f64)], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    assert!(eps > 0.0, "eps must be positive");
    assert!(min_pts >= 1, "min_pts must be at least 1");

    let n = points.len();
    let eps2 = eps * eps;
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    let dx = points[i].0 - points[j].0;
                    let dy = points[i].1 - points[j].1;
                    dx * dx + dy * dy <= eps2
                })
                .collect()
        })
        .collect();

    #[derive(Copy, Clone, PartialEq)]
    enum Label {
        Undefined,
        Noise,
        Cluster(usize),
    }

    let mut labels = vec![Label::Undefined; n];
    let mut next_cluster = 0;

    for seed in 0..n {
        if labels[seed] != Label::Undefined {
            continue;
        }
        if neighbors[seed].len() < min_pts {
            labels[seed] = Label::Noise;
            continue;
        }
        let cluster = next_cluster;
        next_cluster += 1;
        labels[seed] = Label::Cluster(cluster);

        let mut worklist: Vec<usize> = neighbors[seed].clone();
        let mut cursor = 0;
        while cursor < worklist.len() {
            let point = worklist[cursor];
            cursor += 1;
            match labels[point] {
                Label::Cluster(_) => continue,
                Label::Noise | Label::Undefined => {
                    let was_undefined = labels[point] == Label::Undefined;
                    labels[point] = Label::Cluster(cluster);
                    if was_undefined && neighbors[point].len() >= min_pts {
                        worklist.extend(neighbors[point].iter().copied());
                    }
                }
            }
        }
    }

    // Renumber so cluster ids follow each cluster's smallest member index;
    // border points can be absorbed before their cluster's seed is scanned.
    let mut first_member = vec![usize::MAX; next_cluster];
    for (i, label) in labels.iter().enumerate() {
        if let Label::Cluster(c) = label {
            if first_member[*c] == usize::MAX {
                first_member[*c] = i;
            }
        }
    }
    let mut order: Vec<usize> = (0..next_cluster).collect();
    order.sort_by_key(|&c| first_member[c]);
    let mut renumber = vec![0; next_cluster];
    for (rank, &c) in order.iter().enumerate() {
        renumber[c] = rank;
    }

    labels
        .into_iter()
        .map(|label| match label {
            Label::Cluster(c) => Some(renumber[c]),
            _ => None,
        })
        .collect()
}
