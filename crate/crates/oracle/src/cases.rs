//! Comparison tables: predict the relative order of two LF images (or two
//! trie transitions) from the preceding values, the number of 0-tokens at
//! the split node and the tokens right below it. Each checker counts how many
//! pairs the table predicts correctly against the materialized answer.

use crate::{encode, last_column, naive_lf, naive_sa, prev, reverse_prev, rotation, Alpha, Enc, STATIC};

/// Token right below the split node on the way to one of the two leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lead {
    Zero,
    Static,
    Other,
    /// The string ends at the split node.
    End,
}

impl Lead {
    fn of(tok: Option<i64>) -> Lead {
        match tok {
            None => Lead::End,
            Some(0) => Lead::Zero,
            Some(x) if x >= STATIC => Lead::Static,
            Some(_) => Lead::Other,
        }
    }
}

/// What precedes a row: a static code, or a p-count (signed for compl).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prec {
    Static(u32),
    Param(i64),
}

/// Predicted `LF(i) < LF(j)` for rows `i` before `j`.
pub fn lf_less(pi: Prec, pj: Prec, z: i64, lead_i: Lead, lead_j: Lead) -> bool {
    let (vi, vj) = match (pi, pj) {
        (Prec::Static(a), Prec::Static(b)) => return a <= b,
        (Prec::Param(_), Prec::Static(_)) => return true,
        (Prec::Static(_), Prec::Param(_)) => return false,
        (Prec::Param(a), Prec::Param(b)) => (a, b),
    };
    let (a, b) = (vi.abs(), vj.abs());
    match (a <= z, b <= z) {
        (true, true) => vi > 0 && vj > 0 && vi >= vj || vi < 0 && vj > 0 || vi < 0 && vj < 0 && a <= b,
        (true, false) => vi < 0,
        (false, true) => vj > 0,
        (false, false) => {
            let flip_i = vi == z + 1 && lead_i == Lead::Zero && lead_j != Lead::Static;
            let flip_j = vj == -(z + 1) && lead_j == Lead::Zero;
            !(flip_i || flip_j)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub pairs: usize,
    pub correct: usize,
    pub first_miss: Option<(usize, usize)>,
}

impl Tally {
    fn record(&mut self, ok: bool, i: usize, j: usize) {
        self.pairs += 1;
        if ok {
            self.correct += 1;
        } else if self.first_miss.is_none() {
            self.first_miss = Some((i, j));
        }
    }
    pub fn all_correct(&self) -> bool {
        self.pairs == self.correct
    }
}

/// Checks the LF table on every pair of rows. `bwt` is the column under
/// test: static entries are codes, p-entries counts (signed for compl).
pub fn check_lf_table(t: &[u32], a: &Alpha, e: Enc, bwt: &[i64]) -> Tally {
    let n = t.len();
    let sa = naive_sa(t, a, e);
    let rows: Vec<Vec<i64>> = sa.iter().map(|&k| encode(&rotation(t, k), a, e)).collect();
    let last = last_column(t, &sa);
    let lf = naive_lf(t, a, e);
    let prec: Vec<Prec> = (0..n)
        .map(|i| if a.is_p(last[i]) { Prec::Param(bwt[i]) } else { Prec::Static(bwt[i] as u32) })
        .collect();
    // zeros[i][d]: 0-tokens among the first d tokens of row i
    let zeros: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            let mut acc = vec![0i64; n + 1];
            for d in 0..n {
                acc[d + 1] = acc[d] + (r[d] == 0) as i64;
            }
            acc
        })
        .collect();
    let lcp: Vec<usize> = (1..n).map(|i| (0..n).find(|&d| rows[i - 1][d] != rows[i][d]).unwrap_or(n)).collect();
    let mut tally = Tally::default();
    for i in 0..n {
        let mut depth = usize::MAX;
        for j in i + 1..n {
            depth = depth.min(lcp[j - 1]);
            let z = zeros[i][depth];
            let li = Lead::of(rows[i].get(depth).copied());
            let lj = Lead::of(rows[j].get(depth).copied());
            let want = lf[i] < lf[j];
            tally.record(lf_less(prec[i], prec[j], z, li, lj) == want, i + 1, j + 1);
        }
    }
    tally
}

/// One trie edge: the parent's path, the edge symbol and its stored Z value.
#[derive(Debug, Clone)]
pub struct Edge {
    pub parent_path: Vec<u32>,
    pub symbol: u32,
    pub z: u32,
}

/// Checks the dictionary table on every pair of trie edges: the predicted
/// order of the children's reversed encodings against the materialized one.
pub fn check_dict_table(edges: &[Edge], a: &Alpha) -> Tally {
    let rev = |path: &[u32]| reverse_prev(&prev(path, a), a);
    let parents: Vec<Vec<i64>> = edges.iter().map(|e| rev(&e.parent_path)).collect();
    let children: Vec<Vec<i64>> = edges
        .iter()
        .map(|e| {
            let mut p = e.parent_path.clone();
            p.push(e.symbol);
            rev(&p)
        })
        .collect();
    let mut tally = Tally::default();
    for x in 0..edges.len() {
        for y in 0..edges.len() {
            if x == y || parents[x] > parents[y] {
                continue;
            }
            if parents[x] == parents[y] && x > y {
                continue;
            }
            let (ru, rv) = (&parents[x], &parents[y]);
            let depth = if ru == rv { ru.len() } else { (0..).find(|&d| ru.get(d) != rv.get(d)).unwrap() };
            let z = ru[..depth].iter().filter(|&&c| c == 0).count() as i64;
            let li = Lead::of(if ru == rv { None } else { ru.get(depth).copied() });
            let lj = Lead::of(if ru == rv { None } else { rv.get(depth).copied() });
            let prec = |e: &Edge| if a.is_p(e.symbol) { Prec::Param(e.z as i64) } else { Prec::Static(e.z) };
            let want = children[x] < children[y];
            let got = lf_less(prec(&edges[x]), prec(&edges[y]), z, li, lj);
            tally.record(got == want, x, y);
        }
    }
    tally
}
