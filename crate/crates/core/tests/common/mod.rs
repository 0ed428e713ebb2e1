//! Brute-force reference implementations used as test oracles. They share
//! no code with the library beyond its public data types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surveynet::ResponseMatrix;

pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// Position of code `c` on a `k`-point scale mapped to `[-1, 1]`.
pub fn scaled(c: u32, k: u32) -> Q {
    q(-1) + Q::new(2 * c as i64, k as i64 - 1)
}

pub fn sign_of(x: Q) -> i8 {
    if x > q(0) {
        1
    } else if x < q(0) {
        -1
    } else {
        0
    }
}

fn answered(x: &ResponseMatrix, u: usize, v: usize) -> Vec<(usize, u32, u32)> {
    (0..x.n_items())
        .filter_map(|i| Some((i, x.code(u, i)?, x.code(v, i)?)))
        .collect()
}

pub fn exact_oracle(x: &ResponseMatrix, u: usize, v: usize) -> Q {
    q(answered(x, u, v).iter().filter(|(_, a, b)| a == b).count() as i64)
}

/// `co - Σ|Δ|`, optionally stretched by `m / co`.
pub fn score_oracle(x: &ResponseMatrix, u: usize, v: usize, rescale: bool) -> Q {
    let pairs = answered(x, u, v);
    let mut w = q(0);
    for &(i, a, b) in &pairs {
        let k = x.items()[i].scale;
        let d = scaled(a, k) - scaled(b, k);
        w += q(1) - if d < q(0) { -d } else { d };
    }
    if rescale && x.has_missing() && !pairs.is_empty() {
        w = w * q(x.n_items() as i64) / q(pairs.len() as i64);
    }
    w
}

pub fn binarized_oracle(x: &ResponseMatrix, u: usize, v: usize, neutral_agrees: bool) -> Q {
    let mut w = 0;
    for (i, a, b) in answered(x, u, v) {
        let k = x.items()[i].scale;
        let (sa, sb) = (sign_of(scaled(a, k)), sign_of(scaled(b, k)));
        if sa == sb && (sa != 0 || neutral_agrees) {
            w += 1;
        }
    }
    q(w)
}

pub fn random_survey(rng: &mut ChaCha8Rng, n: usize, m: usize, missing: f64) -> ResponseMatrix {
    let scales: Vec<u32> = (0..m).map(|_| rng.gen_range(2..=7)).collect();
    let rows: Vec<Vec<Option<u32>>> = (0..n)
        .map(|_| {
            scales
                .iter()
                .map(|&k| (rng.gen::<f64>() >= missing).then(|| rng.gen_range(0..k)))
                .collect()
        })
        .collect();
    ResponseMatrix::from_codes(&scales, &rows).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected components of `0..n` under `edges`, via BFS.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// `(level, giant fraction)` for every distinct positive weight, highest
/// first, rebuilding the graph from scratch at each level.
pub fn sweep_oracle(n: usize, weight: impl Fn(usize, usize) -> Q) -> Vec<(Q, Q)> {
    let mut all = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            all.push((u, v, weight(u, v)));
        }
    }
    let levels: BTreeSet<Q> = all.iter().map(|t| t.2).filter(|w| *w > q(0)).collect();
    levels
        .into_iter()
        .rev()
        .map(|level| {
            let edges: Vec<(usize, usize)> =
                all.iter().filter(|t| t.2 >= level).map(|t| (t.0, t.1)).collect();
            let giant = components(n, &edges).iter().map(Vec::len).max().unwrap();
            (level, Q::new(giant as i64, n as i64))
        })
        .collect()
}

/// Edge betweenness by enumerating every shortest path between every
/// unordered node pair; each path carries `1 / #paths`.
pub fn betweenness_oracle(n: usize, edges: &[(usize, usize)]) -> BTreeMap<(usize, usize), Q> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let dist_from = |s: usize| {
        let mut d = vec![usize::MAX; n];
        d[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        d
    };
    let mut out: BTreeMap<(usize, usize), Q> =
        edges.iter().map(|&(u, v)| ((u.min(v), u.max(v)), q(0))).collect();
    for s in 0..n {
        let ds = dist_from(s);
        for t in s + 1..n {
            if ds[t] == usize::MAX {
                continue;
            }
            let dt = dist_from(t);
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let x = *path.last().unwrap();
                if x == t {
                    paths.push(path);
                    continue;
                }
                for &y in &adj[x] {
                    if ds[y] == ds[x] + 1 && dt[y] + ds[y] == ds[t] {
                        let mut next = path.clone();
                        next.push(y);
                        stack.push(next);
                    }
                }
            }
            let share = Q::new(1, paths.len() as i64);
            for p in &paths {
                for w in p.windows(2) {
                    *out.get_mut(&(w[0].min(w[1]), w[0].max(w[1]))).unwrap() += share;
                }
            }
        }
    }
    out
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn rand_index_oracle(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut agree, mut total) = (0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            total += 1;
            agree += ((a[i] == a[j]) == (b[i] == b[j])) as u64;
        }
    }
    agree as f64 / total as f64
}
