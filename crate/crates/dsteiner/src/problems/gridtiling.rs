//! Grid Tiling.
//!
//! Orientation: `γ_{i,j}` and `γ_{i,j+1}` agree on the first coordinate,
//! `γ_{i,j}` and `γ_{i+1,j}` agree on the second. So row `i` carries a value
//! `α_i` and column `j` a value `β_j`, and `γ_{i,j} = (α_i, β_j)`.
//! Indices and coordinates are 1-based in the text format and in the public
//! API; cell storage is 0-based.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use thiserror::Error;

pub type Pair = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridTilingError {
    #[error("k and n must be positive")]
    Size,
    #[error("cell ({0},{1}) is empty")]
    EmptyCell(usize, usize),
    #[error("cell ({i},{j}) holds ({x},{y}) outside [1,{n}]^2")]
    OutOfRange { i: usize, j: usize, x: usize, y: usize, n: usize },
    #[error("plant needs n >= 2")]
    PlantTooSmall,
    #[error("no unsolvable instance found after {0} attempts")]
    NoInstanceFound(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridTilingInstance {
    pub k: usize,
    pub n: usize,
    /// `cells[i-1][j-1]` is `S_{i,j}`, sorted and deduplicated.
    pub cells: Vec<Vec<Vec<Pair>>>,
}

/// `gamma[i-1][j-1] = γ_{i,j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridTilingAssignment {
    pub gamma: Vec<Vec<Pair>>,
}

impl GridTilingAssignment {
    pub fn from_alpha_beta(alpha: &[usize], beta: &[usize]) -> Self {
        Self { gamma: alpha.iter().map(|&a| beta.iter().map(|&b| (a, b)).collect()).collect() }
    }

    /// Row values `α_1..α_k`.
    pub fn alpha(&self) -> Vec<usize> {
        self.gamma.iter().map(|row| row[0].0).collect()
    }

    /// Column values `β_1..β_k`.
    pub fn beta(&self) -> Vec<usize> {
        self.gamma[0].iter().map(|c| c.1).collect()
    }
}

impl GridTilingInstance {
    pub fn new(k: usize, n: usize, mut cells: Vec<Vec<Vec<Pair>>>) -> Result<Self, GridTilingError> {
        if k == 0 || n == 0 || cells.len() != k || cells.iter().any(|r| r.len() != k) {
            return Err(GridTilingError::Size);
        }
        for (i, row) in cells.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                cell.sort_unstable();
                cell.dedup();
                if cell.is_empty() {
                    return Err(GridTilingError::EmptyCell(i + 1, j + 1));
                }
                if let Some(&(x, y)) = cell.iter().find(|&&(x, y)| x == 0 || y == 0 || x > n || y > n) {
                    return Err(GridTilingError::OutOfRange { i: i + 1, j: j + 1, x, y, n });
                }
            }
        }
        Ok(Self { k, n, cells })
    }

    /// `S_{i,j}` with 1-based indices.
    pub fn cell(&self, i: usize, j: usize) -> &[Pair] {
        &self.cells[i - 1][j - 1]
    }

    pub fn contains(&self, i: usize, j: usize, p: Pair) -> bool {
        self.cell(i, j).binary_search(&p).is_ok()
    }

    /// Every pair of every cell.
    pub fn all_pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.cells.iter().flatten().flatten().copied()
    }
}

/// Checks membership and both consistency rules.
pub fn check_assignment(inst: &GridTilingInstance, a: &GridTilingAssignment) -> Result<(), String> {
    let k = inst.k;
    if a.gamma.len() != k || a.gamma.iter().any(|r| r.len() != k) {
        return Err("assignment has the wrong shape".into());
    }
    for i in 1..=k {
        for j in 1..=k {
            let g = a.gamma[i - 1][j - 1];
            if !inst.contains(i, j, g) {
                return Err(format!("γ_{i},{j} = {g:?} is not in S_{i},{j}"));
            }
            if j < k && a.gamma[i - 1][j].0 != g.0 {
                return Err(format!("row {i}: first coordinates differ between columns {j} and {}", j + 1));
            }
            if i < k && a.gamma[i][j - 1].1 != g.1 {
                return Err(format!("column {j}: second coordinates differ between rows {i} and {}", i + 1));
            }
        }
    }
    Ok(())
}

/// Exhaustive search over row values; given `α`, every column is checked
/// independently for a value `β_j` with `(α_i, β_j) ∈ S_{i,j}` for all `i`.
pub fn solve_gridtiling(inst: &GridTilingInstance) -> Option<GridTilingAssignment> {
    let (k, n) = (inst.k, inst.n);
    let mut alpha = vec![1usize; k];
    loop {
        let mut beta = Vec::with_capacity(k);
        for j in 1..=k {
            match (1..=n).find(|&b| (1..=k).all(|i| inst.contains(i, j, (alpha[i - 1], b)))) {
                Some(b) => beta.push(b),
                None => break,
            }
        }
        if beta.len() == k {
            return Some(GridTilingAssignment::from_alpha_beta(&alpha, &beta));
        }
        // next alpha vector in lexicographic order
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if alpha[pos] < n {
                alpha[pos] += 1;
                for a in &mut alpha[pos + 1..] {
                    *a = 1;
                }
                break;
            }
        }
    }
}

/// Adds `shift` to `n` and maps every `(x, y)` to `(x+1, y+1)`.
/// With shift 2 every pair ends strictly inside `[1, n']^2`; with shift 1
/// every pair has `min(x, y) > 1`.
pub fn normalize_gridtiling(inst: &GridTilingInstance, shift: usize) -> GridTilingInstance {
    assert!(shift == 1 || shift == 2, "shift must be 1 or 2");
    let cells = inst
        .cells
        .iter()
        .map(|row| row.iter().map(|c| c.iter().map(|&(x, y)| (x + 1, y + 1)).collect()).collect())
        .collect();
    GridTilingInstance::new(inst.k, inst.n + shift, cells).expect("shifted pairs stay in range")
}

/// Inverse of [`normalize_gridtiling`] on assignments.
pub fn denormalize_assignment(a: &GridTilingAssignment) -> GridTilingAssignment {
    GridTilingAssignment { gamma: a.gamma.iter().map(|r| r.iter().map(|&(x, y)| (x - 1, y - 1)).collect()).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantAnswer {
    Yes,
    No,
}

/// Seeded generator. `Yes` plants `(α_i, β_j)` in every cell plus `noise`
/// extra pairs per cell. `No` draws cells of `max(noise, 1)` random pairs
/// until the solver finds no assignment.
pub fn plant_gridtiling(seed: u64, k: usize, n: usize, noise: usize, answer: PlantAnswer) -> Result<GridTilingInstance, GridTilingError> {
    if n < 2 {
        return Err(GridTilingError::PlantTooSmall);
    }
    if k == 0 {
        return Err(GridTilingError::Size);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Pair> = (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).collect();
    let random_cell = |rng: &mut ChaCha8Rng, base: Vec<Pair>, extra: usize| {
        let mut cell = base;
        let mut pool: Vec<Pair> = all.iter().copied().filter(|p| !cell.contains(p)).collect();
        pool.shuffle(rng);
        cell.extend(pool.into_iter().take(extra));
        cell
    };
    match answer {
        PlantAnswer::Yes => {
            let alpha: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
            let beta: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
            let cells = (0..k)
                .map(|i| (0..k).map(|j| random_cell(&mut rng, vec![(alpha[i], beta[j])], noise)).collect())
                .collect();
            GridTilingInstance::new(k, n, cells)
        }
        PlantAnswer::No => {
            const ATTEMPTS: usize = 10_000;
            for _ in 0..ATTEMPTS {
                let cells = (0..k)
                    .map(|_| (0..k).map(|_| random_cell(&mut rng, Vec::new(), noise.max(1))).collect())
                    .collect();
                let inst = GridTilingInstance::new(k, n, cells)?;
                if solve_gridtiling(&inst).is_none() {
                    return Ok(inst);
                }
            }
            Err(GridTilingError::NoInstanceFound(ATTEMPTS))
        }
    }
}

pub fn parse_gridtiling(text: &str) -> Result<GridTilingInstance, GridTilingError> {
    let perr = |line: usize, msg: &str| GridTilingError::Parse { line, msg: msg.to_string() };
    let mut header: Option<(usize, usize)> = None;
    let mut cells: Vec<Vec<Option<Vec<Pair>>>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if toks.len() != 3 || toks[0] != "GT" {
                    return Err(perr(line, "expected `GT k n`"));
                }
                let k: usize = toks[1].parse().map_err(|_| perr(line, "bad k"))?;
                let n: usize = toks[2].parse().map_err(|_| perr(line, "bad n"))?;
                header = Some((k, n));
                cells = vec![vec![None; k]; k];
            }
            Some((k, _)) => {
                if toks.len() != 3 {
                    return Err(perr(line, "expected `i j x1,y1;x2,y2;...`"));
                }
                let i: usize = toks[0].parse().map_err(|_| perr(line, "bad row index"))?;
                let j: usize = toks[1].parse().map_err(|_| perr(line, "bad column index"))?;
                if i == 0 || j == 0 || i > k || j > k {
                    return Err(perr(line, "cell index out of range"));
                }
                let mut pairs = Vec::new();
                for p in toks[2].split(';').filter(|s| !s.is_empty()) {
                    let (x, y) = p.split_once(',').ok_or_else(|| perr(line, "pair needs `x,y`"))?;
                    let x = x.trim().parse().map_err(|_| perr(line, "bad x"))?;
                    let y = y.trim().parse().map_err(|_| perr(line, "bad y"))?;
                    pairs.push((x, y));
                }
                if cells[i - 1][j - 1].replace(pairs).is_some() {
                    return Err(perr(line, "cell given twice"));
                }
            }
        }
    }
    let (k, n) = header.ok_or_else(|| perr(0, "missing header"))?;
    let cells = cells
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, c)| c.ok_or(GridTilingError::EmptyCell(i + 1, j + 1)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    GridTilingInstance::new(k, n, cells)
}

pub fn serialize_gridtiling(inst: &GridTilingInstance) -> String {
    let mut out = format!("GT {} {}\n", inst.k, inst.n);
    for i in 1..=inst.k {
        for j in 1..=inst.k {
            let pairs: Vec<String> = inst.cell(i, j).iter().map(|(x, y)| format!("{x},{y}")).collect();
            writeln!(out, "{i} {j} {}", pairs.join(";")).unwrap();
        }
    }
    out
}
