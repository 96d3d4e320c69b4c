mod common;

use common::*;
use pbwt::pst::{Encoding, SuffixData};
use pbwt::topology::{MarkingScheme, NavTree, Node};
use rand::Rng;

/// Plain pointer tree in preorder numbering.
struct Ptr {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    size: Vec<usize>,
    /// 1-based leaf ranks covered by each node.
    range: Vec<(usize, usize)>,
    leaves: Vec<usize>,
}

impl Ptr {
    fn from_tree(t: &NavTree) -> Ptr {
        let m = t.node_count();
        let mut p = Ptr {
            parent: vec![None; m],
            children: vec![Vec::new(); m],
            depth: vec![0; m],
            size: vec![1; m],
            range: vec![(0, 0); m],
            leaves: Vec::new(),
        };
        // rebuild from the raw parentheses only
        let bp = t.parens();
        let mut stack: Vec<usize> = Vec::new();
        let mut k = 0;
        for i in 0..bp.len() {
            if bp.get(i) {
                if let Some(&top) = stack.last() {
                    p.parent[k] = Some(top);
                    p.children[top].push(k);
                }
                p.depth[k] = stack.len();
                stack.push(k);
                k += 1;
            } else {
                let v = stack.pop().unwrap();
                if p.children[v].is_empty() {
                    p.leaves.push(v);
                    let r = p.leaves.len();
                    p.range[v] = (r, r);
                } else {
                    let f = p.children[v][0];
                    let l = *p.children[v].last().unwrap();
                    p.range[v] = (p.range[f].0, p.range[l].1);
                    p.size[v] = 1 + p.children[v].iter().map(|&c| p.size[c]).sum::<usize>();
                }
            }
        }
        p
    }
    fn ancestors(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(u) = self.parent[v] {
            out.push(u);
            v = u;
        }
        out
    }
    fn descendants(&self, v: usize) -> std::ops::Range<usize> {
        v..v + self.size[v]
    }
    fn lca(&self, a: usize, b: usize) -> usize {
        let aa = self.ancestors(a);
        *self.ancestors(b).iter().find(|x| aa.contains(x)).unwrap()
    }
}

fn random_children<R: Rng>(rng: &mut R, m: usize) -> Vec<Vec<usize>> {
    let mut ch = vec![Vec::new(); m];
    let style = rng.gen_range(0..3);
    for v in 1..m {
        let p = match style {
            0 => rng.gen_range(0..v),
            1 => rng.gen_range(v.saturating_sub(4)..v),
            _ => rng.gen_range(v.saturating_sub(40)..v),
        };
        ch[p].push(v);
    }
    ch
}

/// Random tree whose internal nodes all have at least two children.
fn random_branching<R: Rng>(rng: &mut R, leaves: usize) -> Vec<Vec<usize>> {
    let mut ch: Vec<Vec<usize>> = vec![Vec::new()];
    let mut todo = vec![(0usize, leaves)];
    while let Some((v, l)) = todo.pop() {
        if l == 1 {
            continue;
        }
        let wide = if rng.gen_bool(0.1) { 40 } else { 3 };
        let k = rng.gen_range(2..=l.min(wide));
        let mut cuts: Vec<usize> = (1..l).collect();
        let mut parts = Vec::new();
        let mut chosen = Vec::new();
        for _ in 0..k - 1 {
            chosen.push(cuts.swap_remove(rng.gen_range(0..cuts.len())));
        }
        chosen.sort_unstable();
        let mut prev = 0;
        for c in chosen.into_iter().chain([l]) {
            parts.push(c - prev);
            prev = c;
        }
        for s in parts {
            let c = ch.len();
            ch.push(Vec::new());
            ch[v].push(c);
            todo.push((c, s));
        }
    }
    ch
}

fn check_navigation(t: &NavTree, p: &Ptr, rng: &mut impl Rng) {
    let m = t.node_count();
    assert_eq!(m, p.parent.len());
    assert_eq!(t.leaf_count(), p.leaves.len());
    assert_eq!(t.root(), t.node_at(0));
    for k in 0..m {
        let u = t.node_at(k);
        assert_eq!(t.pre_index(u), k);
        assert_eq!(t.parent(u).map(|x| t.pre_index(x)), p.parent[k]);
        assert_eq!(t.depth(u), p.depth[k]);
        assert_eq!(t.subtree_size(u), p.size[k]);
        assert_eq!(t.is_leaf(u), p.children[k].is_empty());
        assert_eq!(t.leaf_range(u), p.range[k]);
        assert_eq!(t.lmost_leaf(u), p.range[k].0);
        assert_eq!(t.rmost_leaf(u), p.range[k].1);
        assert_eq!(t.num_children(u), p.children[k].len());
        let kids: Vec<usize> = t.children(u).map(|c| t.pre_index(c)).collect();
        assert_eq!(kids, p.children[k]);
        assert_eq!(t.first_child(u).map(|c| t.pre_index(c)), p.children[k].first().copied());
        for (q, &c) in p.children[k].iter().enumerate() {
            assert_eq!(t.pre_index(t.child(u, q + 1).unwrap()), c);
        }
        assert_eq!(t.child(u, p.children[k].len() + 1), None);
        assert_eq!(t.child(u, 0), None);
        let anc = p.ancestors(k);
        for (d, &a) in anc.iter().rev().enumerate() {
            assert_eq!(t.pre_index(t.level_ancestor(u, d).unwrap()), a);
        }
        assert_eq!(t.level_ancestor(u, p.depth[k] + 1), None);
        if let Some(par) = p.parent[k] {
            let sib = p.children[par].iter().position(|&c| c == k).unwrap();
            assert_eq!(t.next_sibling(u).map(|c| t.pre_index(c)), p.children[par].get(sib + 1).copied());
        }
    }
    for (r, &v) in p.leaves.iter().enumerate() {
        assert_eq!(t.pre_index(t.leaf_select(r + 1)), v);
        assert_eq!(t.leaf_rank(t.node_at(v)), r + 1);
    }
    for _ in 0..200.min(m * m) {
        let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let (u, v) = (t.node_at(a), t.node_at(b));
        assert_eq!(t.pre_index(t.lca(u, v)), p.lca(a, b));
        assert_eq!(t.is_ancestor(u, v), p.ancestors(b).contains(&a));
    }
}

/// Marked set recomputed from its definition.
fn oracle_marks(p: &Ptr, g: usize) -> Vec<bool> {
    let m = p.parent.len();
    let nl = p.leaves.len();
    let mut mark = vec![false; m];
    mark[0] = true;
    let mut s = 0;
    while s < nl {
        let e = (s + g).min(nl) - 1;
        mark[p.lca(p.leaves[s], p.leaves[e])] = true;
        s += g;
    }
    loop {
        let list: Vec<usize> = (0..m).filter(|&k| mark[k]).collect();
        let before = list.len();
        for w in list.windows(2) {
            mark[p.lca(w[0], w[1])] = true;
        }
        if mark.iter().filter(|&&b| b).count() == before {
            return mark;
        }
    }
}

fn check_marking(t: &NavTree, p: &Ptr, g: usize) {
    let ms = MarkingScheme::new(t, g);
    let g = ms.g();
    let m = p.parent.len();
    let nl = p.leaves.len();
    let mark = oracle_marks(p, g);
    let marked: Vec<bool> = (0..m).map(|k| ms.is_marked_pre(k)).collect();
    assert_eq!(marked, mark);
    let hmd = |v: usize| p.descendants(v).filter(|&x| mark[x]).min_by_key(|&x| p.depth[x]);
    let mut prime = vec![false; m];
    for k in 1..m {
        if mark[k] {
            let anc = p.ancestors(k);
            let lm = anc[1..].iter().position(|&a| mark[a]).unwrap() + 1;
            prime[anc[lm - 1]] = true;
        }
    }
    let groups = nl.div_ceil(g);
    let branching = (1..m).all(|v| p.children[v].len() != 1);
    assert!(ms.marked_count() <= 2 * groups + 1, "marked {} groups {}", ms.marked_count(), groups);
    assert!(ms.prime_count() <= ms.marked_count());
    for k in 0..m {
        let u = t.node_at(k);
        assert_eq!(ms.is_prime(t, u), prime[k]);
        let anc = p.ancestors(k);
        let lma = *anc.iter().find(|&&a| mark[a]).unwrap();
        assert_eq!(t.pre_index(ms.lowest_marked_ancestor(t, u)), lma);
        assert_eq!(ms.highest_marked_descendant(t, u).map(|x| t.pre_index(x)), hmd(k));
        let lpa = anc.iter().find(|&&a| prime[a]).copied();
        assert_eq!(ms.lowest_prime_ancestor(t, u).map(|x| t.pre_index(x)), lpa);

        let leaves = |v: usize| p.range[v].1 + 1 - p.range[v].0;
        if prime[k] {
            let star = hmd(k).unwrap();
            assert!(leaves(k) - leaves(star) <= 4 * g - 4, "prime excess {} > 4g-4", leaves(k) - leaves(star));
        }
        if mark[k] && k != 0 {
            let anc = p.ancestors(k);
            let gap = anc[1..].iter().position(|&a| mark[a]).unwrap();
            // unary chains can be arbitrarily long without holding a group
            if branching {
                assert!(gap <= g, "{gap} nodes between marked nodes, g = {g}");
            }
        }
        if mark[k] {
            for &c in &p.children[k] {
                if hmd(c).is_none() {
                    assert!(leaves(c) <= 2 * g - 2);
                }
            }
        }
    }
}

#[test]
fn navigation_matches_pointer_tree() {
    let mut rng = rng(31);
    for it in 0..1000 {
        let m = if it % 10 == 0 { rng.gen_range(1000..=2000) } else { rng.gen_range(1..200) };
        let ch = random_children(&mut rng, m);
        let (t, handles) = NavTree::from_children(&ch);
        let p = Ptr::from_tree(&t);
        // handles follow the input numbering
        for (v, kids) in ch.iter().enumerate() {
            let got: Vec<Node> = t.children(handles[v]).collect();
            let want: Vec<Node> = kids.iter().map(|&c| handles[c]).collect();
            assert_eq!(got, want);
        }
        check_navigation(&t, &p, &mut rng);
    }
}

#[test]
fn marking_matches_definition() {
    let mut rng = rng(32);
    for it in 0..300 {
        let size = rng.gen_range(1..400);
        let ch = if it % 2 == 0 { random_children(&mut rng, size) } else { random_branching(&mut rng, size) };
        let (t, _) = NavTree::from_children(&ch);
        let p = Ptr::from_tree(&t);
        for g in [2, 3, 4, 7] {
            check_marking(&t, &p, g);
        }
    }
}

#[test]
fn marking_on_suffix_trees() {
    let mut rng = rng(33);
    for _ in 0..60 {
        let (spec, text) = random_case(&mut rng, 200, false);
        let d = SuffixData::build(&text, &spec, Encoding::Prev).unwrap();
        let p = Ptr::from_tree(&d.tree);
        for g in [2, 3, 5] {
            check_marking(&d.tree, &p, g);
        }
    }
}

#[test]
fn star_tree_has_large_lowest_marked_node() {
    // the root of a star is the only marked node, whatever the number of leaves
    let ch: Vec<Vec<usize>> = std::iter::once((1..=50).collect()).chain((1..=50).map(|_| vec![])).collect();
    let (t, _) = NavTree::from_children(&ch);
    let ms = MarkingScheme::new(&t, 3);
    assert_eq!(ms.marked_count(), 1);
    assert_eq!(ms.prime_count(), 0);
    assert_eq!(ms.highest_marked_descendant(&t, t.node_at(1)), None);
}

#[test]
fn single_node_tree() {
    let (t, _) = NavTree::from_children(&[vec![]]);
    assert_eq!(t.node_count(), 1);
    assert_eq!(t.leaf_count(), 1);
    assert!(t.is_leaf(t.root()));
    assert_eq!(t.parent(t.root()), None);
    let ms = MarkingScheme::new(&t, 2);
    assert_eq!(ms.lowest_marked_ancestor(&t, t.root()), t.root());
    assert_eq!(ms.highest_marked_descendant(&t, t.root()), Some(t.root()));
}
