//! Partitioned Subgraph Isomorphism.
//!
//! Pattern vertices `g_1..g_ℓ` and host classes `H_1..H_ℓ` are 1-based in the
//! text format and 0-based in memory. Host vertex ids are dense from 0.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsiError {
    #[error("pattern vertex {0} out of range")]
    PatternVertex(usize),
    #[error("host vertex {0} out of range")]
    HostVertex(usize),
    #[error("host vertex {0} assigned to class {1}, outside 1..=l")]
    Class(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiInstance {
    /// Number of pattern vertices, equal to the number of classes.
    pub l: usize,
    /// Pattern edges `(a, b)` with `a < b`, sorted, no duplicates.
    pub pattern_edges: Vec<(usize, usize)>,
    /// `host_class[v]` is the class of host vertex `v`.
    pub host_class: Vec<usize>,
    /// Host edges `(u, v)` with `u < v`, sorted, no duplicates.
    pub host_edges: Vec<(usize, usize)>,
}

/// `phi[i]` is the host vertex chosen for pattern vertex `g_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiAssignment {
    pub phi: Vec<usize>,
}

fn normalize_edges(edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
    e.sort_unstable();
    e.dedup();
    e
}

impl PsiInstance {
    pub fn new(
        l: usize,
        pattern_edges: Vec<(usize, usize)>,
        host_class: Vec<usize>,
        host_edges: Vec<(usize, usize)>,
    ) -> Result<Self, PsiError> {
        if let Some(&(a, b)) = pattern_edges.iter().find(|&&(a, b)| a >= l || b >= l) {
            return Err(PsiError::PatternVertex(a.max(b)));
        }
        if let Some((v, &c)) = host_class.iter().enumerate().find(|(_, &c)| c >= l) {
            return Err(PsiError::Class(v, c + 1));
        }
        let hn = host_class.len();
        if let Some(&(a, b)) = host_edges.iter().find(|&&(a, b)| a >= hn || b >= hn) {
            return Err(PsiError::HostVertex(a.max(b)));
        }
        Ok(Self { l, pattern_edges: normalize_edges(pattern_edges), host_class, host_edges: normalize_edges(host_edges) })
    }

    pub fn host_vertex_count(&self) -> usize {
        self.host_class.len()
    }

    /// Host vertices of class `i` (0-based), ascending.
    pub fn class(&self, i: usize) -> Vec<usize> {
        (0..self.host_class.len()).filter(|&v| self.host_class[v] == i).collect()
    }

    pub fn host_has_edge(&self, u: usize, v: usize) -> bool {
        self.host_edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn pattern_connected(&self) -> bool {
        if self.l == 0 {
            return true;
        }
        let mut seen = vec![false; self.l];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.pattern_edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn check_psi_assignment(inst: &PsiInstance, a: &PsiAssignment) -> Result<(), String> {
    if a.phi.len() != inst.l {
        return Err("phi has the wrong length".into());
    }
    for (i, &v) in a.phi.iter().enumerate() {
        if v >= inst.host_vertex_count() || inst.host_class[v] != i {
            return Err(format!("phi(g_{}) = {v} is not in H_{}", i + 1, i + 1));
        }
    }
    for (i, &v) in a.phi.iter().enumerate() {
        if a.phi[..i].contains(&v) {
            return Err("phi is not injective".into());
        }
    }
    for &(x, y) in &inst.pattern_edges {
        if !inst.host_has_edge(a.phi[x], a.phi[y]) {
            return Err(format!("pattern edge g_{}g_{} maps to a non-edge", x + 1, y + 1));
        }
    }
    Ok(())
}

/// Exhaustive backtracking over `∏|H_i|` candidate maps, pruning a partial map
/// as soon as a pattern edge between two assigned vertices is missing.
pub fn solve_psi(inst: &PsiInstance) -> Option<PsiAssignment> {
    let classes: Vec<Vec<usize>> = (0..inst.l).map(|i| inst.class(i)).collect();
    let mut phi = Vec::with_capacity(inst.l);
    fn rec(inst: &PsiInstance, classes: &[Vec<usize>], phi: &mut Vec<usize>) -> bool {
        let i = phi.len();
        if i == inst.l {
            return true;
        }
        for &v in &classes[i] {
            let ok = inst
                .pattern_edges
                .iter()
                .filter(|&&(a, b)| b == i && a < i)
                .all(|&(a, _)| inst.host_has_edge(phi[a], v));
            if ok {
                phi.push(v);
                if rec(inst, classes, phi) {
                    return true;
                }
                phi.pop();
            }
        }
        false
    }
    rec(inst, &classes, &mut phi).then_some(PsiAssignment { phi })
}

/// Seeded family member: a connected random pattern on `l` vertices, a host
/// with `host_n >= l` vertices (every class nonempty) and `host_m` edges.
pub fn random_psi(seed: u64, l: usize, host_n: usize, host_m: usize) -> PsiInstance {
    assert!(l >= 1 && host_n >= l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random spanning tree plus maybe a few extra pattern edges
    let mut pattern = Vec::new();
    for v in 1..l {
        pattern.push((rng.gen_range(0..v), v));
    }
    for a in 0..l {
        for b in a + 1..l {
            if rng.gen_bool(0.3) {
                pattern.push((a, b));
            }
        }
    }
    let mut class: Vec<usize> = (0..l).collect();
    for _ in l..host_n {
        class.push(rng.gen_range(0..l));
    }
    class.shuffle(&mut rng);
    let mut pairs: Vec<(usize, usize)> = (0..host_n)
        .flat_map(|u| (u + 1..host_n).map(move |v| (u, v)))
        .collect();
    // only pairs across classes can ever matter, so draw edges from those
    pairs.retain(|&(u, v)| class[u] != class[v]);
    pairs.shuffle(&mut rng);
    pairs.truncate(host_m);
    PsiInstance::new(l, pattern, class, pairs).expect("generated in range")
}

pub fn parse_psi(text: &str) -> Result<PsiInstance, PsiError> {
    let perr = |line: usize, msg: &str| PsiError::Parse { line, msg: msg.to_string() };
    let mut l: Option<usize> = None;
    let mut ge = Vec::new();
    let mut hv: Vec<(usize, usize)> = Vec::new();
    let mut he = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let nums: Vec<usize> = toks[1..]
            .iter()
            .map(|t| t.parse().map_err(|_| perr(line, "bad number")))
            .collect::<Result<_, _>>()?;
        let want = |c: usize| if nums.len() == c { Ok(()) } else { Err(perr(line, "wrong field count")) };
        match toks[0] {
            "PSI" => {
                want(1)?;
                if l.replace(nums[0]).is_some() {
                    return Err(perr(line, "duplicate header"));
                }
            }
            _ if l.is_none() => return Err(perr(line, "`PSI l` must come first")),
            "GE" => {
                want(2)?;
                if nums[0] == 0 || nums[1] == 0 {
                    return Err(perr(line, "pattern vertices are 1-based"));
                }
                ge.push((nums[0] - 1, nums[1] - 1));
            }
            "HV" => {
                want(2)?;
                if nums[1] == 0 {
                    return Err(perr(line, "classes are 1-based"));
                }
                hv.push((nums[0], nums[1] - 1));
            }
            "HE" => {
                want(2)?;
                he.push((nums[0], nums[1]));
            }
            _ => return Err(perr(line, "unknown record")),
        }
    }
    let l = l.ok_or_else(|| perr(0, "missing header"))?;
    let hn = hv.iter().map(|&(v, _)| v + 1).max().unwrap_or(0);
    let mut class = vec![usize::MAX; hn];
    for (v, c) in hv {
        if class[v] != usize::MAX {
            return Err(perr(0, "host vertex given twice"));
        }
        class[v] = c;
    }
    if let Some(v) = class.iter().position(|&c| c == usize::MAX) {
        return Err(PsiError::HostVertex(v));
    }
    PsiInstance::new(l, ge, class, he)
}

pub fn serialize_psi(inst: &PsiInstance) -> String {
    let mut out = format!("PSI {}\n", inst.l);
    for &(a, b) in &inst.pattern_edges {
        writeln!(out, "GE {} {}", a + 1, b + 1).unwrap();
    }
    for (v, &c) in inst.host_class.iter().enumerate() {
        writeln!(out, "HV {v} {}", c + 1).unwrap();
    }
    for &(a, b) in &inst.host_edges {
        writeln!(out, "HE {a} {b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Host path v - u - w with H_1 = {v, w}, H_2 = {u}; pattern a single edge.
    pub(crate) fn three_path() -> PsiInstance {
        PsiInstance::new(2, vec![(0, 1)], vec![0, 1, 0], vec![(0, 1), (1, 2)]).unwrap()
    }

    fn brute(inst: &PsiInstance) -> bool {
        let hn = inst.host_vertex_count();
        let mut phi = vec![0usize; inst.l];
        loop {
            if check_psi_assignment(inst, &PsiAssignment { phi: phi.clone() }).is_ok() {
                return true;
            }
            let mut p = 0;
            loop {
                if p == phi.len() {
                    return false;
                }
                phi[p] += 1;
                if phi[p] < hn {
                    break;
                }
                phi[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn three_vertex_path_host() {
        let a = solve_psi(&three_path()).unwrap();
        assert!(a.phi == vec![0, 1] || a.phi == vec![2, 1]);
    }

    #[test]
    fn edge_into_isolated_vertices() {
        let inst = PsiInstance::new(2, vec![(0, 1)], vec![0, 1], vec![]).unwrap();
        assert!(solve_psi(&inst).is_none());
    }

    #[test]
    fn triangle_into_triangle() {
        let inst = PsiInstance::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![0, 1, 2], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(solve_psi(&inst).unwrap().phi, vec![0, 1, 2]);
    }

    #[test]
    fn checker_rejects_bad_maps() {
        let inst = three_path();
        assert!(check_psi_assignment(&inst, &PsiAssignment { phi: vec![1, 1] }).is_err());
        assert!(check_psi_assignment(&inst, &PsiAssignment { phi: vec![0] }).is_err());
        assert!(check_psi_assignment(&inst, &PsiAssignment { phi: vec![0, 1] }).is_ok());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let inst = random_psi(5, 3, 6, 7);
        let text = serialize_psi(&inst);
        assert_eq!(parse_psi(&text).unwrap(), inst);
        assert!(parse_psi("GE 1 2\n").is_err());
        assert!(parse_psi("PSI 2\nHV 0 3\n").is_err());
        assert!(parse_psi("PSI 2\nHV 1 1\n").is_err());
    }

    #[test]
    fn generator_shape() {
        for seed in 0..30 {
            let inst = random_psi(seed, 3, 6, 7);
            assert!(inst.pattern_connected());
            assert_eq!(inst.host_vertex_count(), 6);
            assert!(inst.host_edges.len() <= 7);
            assert!((0..3).all(|i| !inst.class(i).is_empty()));
        }
    }

    #[test]
    fn solver_agrees_with_brute_force_on_family() {
        let mut answers = [0usize; 2];
        for seed in 0..200 {
            let l = 2 + (seed as usize % 2);
            let inst = random_psi(seed, l, 5 + (seed as usize % 2), 3 + (seed as usize % 5));
            let found = solve_psi(&inst);
            if let Some(a) = &found {
                assert!(check_psi_assignment(&inst, a).is_ok());
            }
            assert_eq!(found.is_some(), brute(&inst), "seed {seed}");
            answers[found.is_some() as usize] += 1;
        }
        assert!(answers[0] > 10 && answers[1] > 10, "{answers:?}");
    }
}
