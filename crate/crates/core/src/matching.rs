//! Maximum bipartite matching by Hopcroft–Karp layered augmenting paths.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum matching between `left` vertices `0..adj.len()` and right vertices
/// `0..n_right`. Returns, for each left vertex, its matched right vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut match_left = vec![FREE; n_left];
    let mut match_right = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];

    loop {
        // BFS from all free left vertices builds the layer graph.
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if match_left[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_right[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..n_left {
            if match_left[l] == FREE {
                augment(l, adj, &mut match_left, &mut match_right, &mut dist);
            }
        }
    }

    match_left
        .into_iter()
        .map(|r| (r != FREE).then_some(r))
        .collect()
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        let next = match_right[r];
        let ok = next == FREE
            || (dist[next] == dist[l] + 1 && augment(next, adj, match_left, match_right, dist));
        if ok {
            match_left[l] = r;
            match_right[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(m: &[Option<usize>]) -> usize {
        m.iter().flatten().count()
    }

    #[test]
    fn perfect_on_path() {
        // left {0,1}, right {0,1}: 0-0, 1-0, 1-1
        let m = hopcroft_karp(&[vec![0], vec![0, 1]], 2);
        assert_eq!(m, vec![Some(0), Some(1)]);
    }

    #[test]
    fn deficient_star() {
        // three left vertices all attached to one right vertex
        let m = hopcroft_karp(&[vec![0], vec![0], vec![0]], 1);
        assert_eq!(size(&m), 1);
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy would match 0-0 and block 1; optimum is 0-1, 1-0, 2-2
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = hopcroft_karp(&adj, 3);
        assert_eq!(size(&m), 3);
        let mut used = [false; 3];
        for (l, r) in m.iter().enumerate() {
            let r = r.unwrap();
            assert!(adj[l].contains(&r));
            assert!(!used[r]);
            used[r] = true;
        }
    }

    #[test]
    fn empty_inputs() {
        assert!(hopcroft_karp(&[], 0).is_empty());
        assert_eq!(hopcroft_karp(&[vec![]], 0), vec![None]);
    }
}
