//! Finite trees of finite-support functions on end-segments of levels.
//!
//! A node is a function whose domain is an end-segment `[start, alpha)` of
//! the level set `0..alpha`, storing only its nonzero values. Extension of
//! functions is the tree order: extending a node adds levels *below* it, so
//! the empty function is the root, level `alpha-1` is the first level above
//! the root, and level `0` is the top. For finite `alpha` and values below
//! a branching bound `b`, the tree is the `b`-ary truncation of the tree of
//! strings of length at most `alpha`, the node corresponding to the string
//! of its values read from level `alpha-1` down to `start`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("nodes live in different trees: alpha {0} vs {1}")]
    AlphaMismatch(u32, u32),
    #[error("start {start} exceeds alpha {alpha}")]
    StartOutOfRange { start: u32, alpha: u32 },
    #[error("level {level} outside domain [{start}, {alpha})")]
    LevelOutOfRange { level: u32, start: u32, alpha: u32 },
    #[error("node already has full domain; no level below 0")]
    NoRoomBelow,
    #[error("inclusion requires alpha {0} <= beta {1}")]
    BadInclusion(u32, u32),
    #[error("zeta requires beta {0} < alpha {1}")]
    BadZeta(u32, u32),
    #[error("cannot parse tree node from {0:?}")]
    Parse(String),
}

/// A finite-support function on an end-segment of `0..alpha`.
///
/// Zero values are implicit: `values` holds only the nonzero entries, all
/// with keys in `[start, alpha)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeNode {
    alpha: u32,
    start: u32,
    values: BTreeMap<u32, u32>,
}

impl TreeNode {
    /// Builds a node with domain `[start, alpha)`. Zero entries in `values`
    /// are dropped; out-of-domain keys are an error.
    pub fn new(
        alpha: u32,
        start: u32,
        values: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, TreeError> {
        if start > alpha {
            return Err(TreeError::StartOutOfRange { start, alpha });
        }
        let mut stored = BTreeMap::new();
        for (level, v) in values {
            if level < start || level >= alpha {
                return Err(TreeError::LevelOutOfRange {
                    level,
                    start,
                    alpha,
                });
            }
            if v != 0 {
                stored.insert(level, v);
            }
        }
        Ok(TreeNode {
            alpha,
            start,
            values: stored,
        })
    }

    /// The empty function: domain `[alpha, alpha)`.
    pub fn root(alpha: u32) -> Self {
        TreeNode {
            alpha,
            start: alpha,
            values: BTreeMap::new(),
        }
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Least level of the domain; equals `alpha` for the root.
    pub fn start(&self) -> u32 {
        self.start
    }

    /// The level predicate: a node is at level `beta` when its domain is
    /// exactly `[beta, alpha)`.
    pub fn level(&self) -> u32 {
        self.start
    }

    pub fn is_root(&self) -> bool {
        self.start == self.alpha
    }

    /// Number of levels in the domain.
    pub fn len(&self) -> u32 {
        self.alpha - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Value at `level`, or `None` outside the domain.
    pub fn value(&self, level: u32) -> Option<u32> {
        if level < self.start || level >= self.alpha {
            None
        } else {
            Some(self.values.get(&level).copied().unwrap_or(0))
        }
    }

    /// Nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Values read from level `alpha-1` down to `start` (the string form).
    pub fn word(&self) -> Vec<u32> {
        (self.start..self.alpha)
            .rev()
            .map(|lvl| self.value(lvl).unwrap())
            .collect()
    }

    /// Inverse of [`TreeNode::word`].
    pub fn from_word(alpha: u32, word: &[u32]) -> Result<Self, TreeError> {
        if word.len() as u32 > alpha {
            return Err(TreeError::StartOutOfRange {
                start: 0,
                alpha,
            });
        }
        let start = alpha - word.len() as u32;
        TreeNode::new(
            alpha,
            start,
            word.iter()
                .enumerate()
                .map(|(i, &v)| (alpha - 1 - i as u32, v)),
        )
    }

    /// Parses the `⟨v,...⟩@alpha` notation (ASCII `<...>` also accepted).
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let t = text.trim();
        let err = || TreeError::Parse(text.to_string());
        let rest = t
            .strip_prefix('⟨')
            .or_else(|| t.strip_prefix('<'))
            .ok_or_else(err)?;
        let (body, alpha_part) = rest
            .split_once('⟩')
            .or_else(|| rest.split_once('>'))
            .ok_or_else(err)?;
        let alpha: u32 = alpha_part
            .strip_prefix('@')
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(err)?;
        let body = body.trim();
        let word: Vec<u32> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|p| p.trim().parse().map_err(|_| err()))
                .collect::<Result<_, _>>()?
        };
        TreeNode::from_word(alpha, &word)
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word().iter().map(|v| v.to_string()).collect();
        write!(f, "⟨{}⟩@{}", parts.join(","), self.alpha)
    }
}

/// A set of levels of a tree with `alpha` levels, used for restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    alpha: u32,
    levels: Vec<u32>,
}

impl LevelSet {
    /// Levels must be strictly below `alpha`; duplicates are dropped.
    pub fn new(alpha: u32, levels: impl IntoIterator<Item = u32>) -> Result<Self, TreeError> {
        let mut set: Vec<u32> = levels.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if let Some(&bad) = set.iter().find(|&&l| l >= alpha) {
            return Err(TreeError::LevelOutOfRange {
                level: bad,
                start: 0,
                alpha,
            });
        }
        Ok(LevelSet { alpha, levels: set })
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn contains(&self, level: u32) -> bool {
        self.levels.binary_search(&level).is_ok()
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }
}

fn check_alpha(a: &TreeNode, b: &TreeNode) -> Result<(), TreeError> {
    if a.alpha != b.alpha {
        Err(TreeError::AlphaMismatch(a.alpha, b.alpha))
    } else {
        Ok(())
    }
}

/// The tree order: `a` below `b` iff `a` is a subfunction of `b`.
pub fn tree_leq(a: &TreeNode, b: &TreeNode) -> Result<bool, TreeError> {
    check_alpha(a, b)?;
    if b.start > a.start {
        return Ok(false);
    }
    Ok((a.start..a.alpha).all(|lvl| a.value(lvl) == b.value(lvl)))
}

/// Strictly below in the tree order.
pub fn tree_lt(a: &TreeNode, b: &TreeNode) -> Result<bool, TreeError> {
    Ok(tree_leq(a, b)? && a != b)
}

/// Incomparable in the tree order.
pub fn incomparable(a: &TreeNode, b: &TreeNode) -> Result<bool, TreeError> {
    Ok(!tree_leq(a, b)? && !tree_leq(b, a)?)
}

/// Greatest common subfunction: the restriction of either argument to the
/// largest end-segment on which both agree. The root when they disagree at
/// every common level.
pub fn meet(a: &TreeNode, b: &TreeNode) -> Result<TreeNode, TreeError> {
    check_alpha(a, b)?;
    let lo = a.start.max(b.start);
    // Minimal beta >= lo with agreement on [beta, alpha).
    let mut beta = lo;
    for lvl in (lo..a.alpha).rev() {
        if a.value(lvl) != b.value(lvl) {
            beta = lvl + 1;
            break;
        }
    }
    // Handle the degenerate scan: if they agree everywhere on [lo, alpha),
    // the loop leaves beta == lo, which is correct; a disagreement at the
    // deepest level leaves beta from the break.
    TreeNode::new(
        a.alpha,
        beta,
        a.values
            .range(beta..)
            .map(|(&k, &v)| (k, v)),
    )
}

/// Lexicographic order: below-in-tree first, then value comparison at the
/// topmost disagreeing level.
pub fn lex_cmp(a: &TreeNode, b: &TreeNode) -> Result<Ordering, TreeError> {
    check_alpha(a, b)?;
    if a == b {
        return Ok(Ordering::Equal);
    }
    if tree_leq(a, b)? {
        return Ok(Ordering::Less);
    }
    if tree_leq(b, a)? {
        return Ok(Ordering::Greater);
    }
    let m = meet(a, b)?;
    let gamma = m.start - 1;
    Ok(a.value(gamma).cmp(&b.value(gamma)))
}

/// Extends `eta` one level downward with value `i`.
pub fn concat_low(eta: &TreeNode, i: u32) -> Result<TreeNode, TreeError> {
    if eta.start == 0 {
        return Err(TreeError::NoRoomBelow);
    }
    let beta = eta.start - 1;
    let mut values = eta.values.clone();
    if i != 0 {
        values.insert(beta, i);
    }
    Ok(TreeNode {
        alpha: eta.alpha,
        start: beta,
        values,
    })
}

/// Embeds `eta` into the tree with one more level, adding a bottom entry
/// with value `i` at the new level `eta.alpha()`.
pub fn concat_high(i: u32, eta: &TreeNode) -> TreeNode {
    let mut values = eta.values.clone();
    if i != 0 {
        values.insert(eta.alpha, i);
    }
    TreeNode {
        alpha: eta.alpha + 1,
        start: eta.start,
        values,
    }
}

/// Canonical inclusion: pads zeros at the new bottom levels `[alpha, beta)`.
pub fn iota(alpha: u32, beta: u32, eta: &TreeNode) -> Result<TreeNode, TreeError> {
    if eta.alpha != alpha {
        return Err(TreeError::AlphaMismatch(eta.alpha, alpha));
    }
    if alpha > beta {
        return Err(TreeError::BadInclusion(alpha, beta));
    }
    Ok(TreeNode {
        alpha: beta,
        start: eta.start,
        values: eta.values.clone(),
    })
}

/// The all-zeros node with domain `[beta, alpha)`.
pub fn zeta(beta: u32, alpha: u32) -> Result<TreeNode, TreeError> {
    if beta >= alpha {
        return Err(TreeError::BadZeta(beta, alpha));
    }
    Ok(TreeNode {
        alpha,
        start: beta,
        values: BTreeMap::new(),
    })
}

/// All nodes with `alpha` levels and values below `branching`, ordered by
/// domain length ascending (root first) and lexicographically within a
/// length.
pub fn enumerate(alpha: u32, branching: u32) -> Vec<TreeNode> {
    assert!(branching >= 1, "branching must be at least 1");
    let mut out = Vec::new();
    for len in 0..=alpha {
        let mut word = vec![0u32; len as usize];
        loop {
            out.push(TreeNode::from_word(alpha, &word).unwrap());
            // Advance the word as a base-`branching` counter; stop on wrap.
            let mut pos = len as usize;
            let mut wrapped = true;
            while pos > 0 {
                pos -= 1;
                if word[pos] + 1 < branching {
                    word[pos] += 1;
                    word[pos + 1..].fill(0);
                    wrapped = false;
                    break;
                }
                word[pos] = 0;
            }
            if wrapped {
                break;
            }
        }
    }
    out
}

/// The restriction to a set of levels: nodes whose domain starts in `w`
/// and which vanish off `w`. The root always belongs to the restriction.
pub fn restrict(alpha: u32, w: &LevelSet, branching: u32) -> Vec<TreeNode> {
    assert_eq!(w.alpha(), alpha, "level set is for a different tree");
    enumerate(alpha, branching)
        .into_iter()
        .filter(|eta| {
            if eta.is_root() {
                return true;
            }
            w.contains(eta.start)
                && eta
                    .support()
                    .all(|(lvl, _)| w.contains(lvl))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(alpha: u32, start: u32, vals: &[(u32, u32)]) -> TreeNode {
        TreeNode::new(alpha, start, vals.iter().copied()).unwrap()
    }

    #[test]
    fn zeta_chain_is_nested() {
        // zeta(beta+1) is a subfunction of zeta(beta).
        let z0 = zeta(0, 2).unwrap();
        let z1 = zeta(1, 2).unwrap();
        assert!(tree_leq(&z1, &z0).unwrap());
        assert!(!tree_leq(&z0, &z1).unwrap());
        for n in 1..=5u32 {
            for k in 0..n {
                assert!(tree_leq(&TreeNode::root(n), &zeta(k, n).unwrap()).unwrap());
                assert!(tree_leq(&zeta(k, n).unwrap(), &zeta(0, n).unwrap()).unwrap());
                assert_eq!(zeta(k, n).unwrap().level(), k);
            }
        }
    }

    #[test]
    fn zeta_has_empty_support() {
        let z = zeta(2, 3).unwrap();
        assert_eq!(z.start(), 2);
        assert_eq!(z.support().count(), 0);
        assert_eq!(z.to_string(), "⟨0⟩@3");
    }

    #[test]
    fn leq_examples() {
        // Extension of functions.
        let a = node(2, 1, &[(1, 1)]);
        let b = node(2, 0, &[(1, 1), (0, 5)]);
        assert!(tree_leq(&a, &b).unwrap());
        // Value disagreement at level 1 (b is implicitly zero there).
        let c = node(2, 0, &[(0, 5)]);
        assert!(!tree_leq(&a, &c).unwrap());
    }

    #[test]
    fn leq_alpha_mismatch_is_an_error() {
        let a = TreeNode::root(2);
        let b = TreeNode::root(3);
        assert!(matches!(
            tree_leq(&a, &b),
            Err(TreeError::AlphaMismatch(2, 3))
        ));
    }

    #[test]
    fn meet_examples() {
        // Idempotent.
        for eta in enumerate(3, 2) {
            assert_eq!(meet(&eta, &eta).unwrap(), eta);
        }
        // Agreement at level 1, disagreement at level 0.
        let a = node(2, 0, &[(1, 1)]);
        let b = node(2, 0, &[(1, 1), (0, 3)]);
        assert_eq!(meet(&a, &b).unwrap(), node(2, 1, &[(1, 1)]));
        // Total disagreement: the root.
        let c = node(2, 1, &[(1, 1)]);
        let d = node(2, 1, &[(1, 2)]);
        assert_eq!(meet(&c, &d).unwrap(), TreeNode::root(2));
    }

    #[test]
    fn lex_examples() {
        let z0 = zeta(0, 2).unwrap();
        let z1 = zeta(1, 2).unwrap();
        assert_eq!(lex_cmp(&z1, &z0).unwrap(), Ordering::Less);
        let l = node(1, 0, &[]);
        let r = node(1, 0, &[(0, 1)]);
        assert_eq!(lex_cmp(&l, &r).unwrap(), Ordering::Less);
        assert_eq!(lex_cmp(&r, &l).unwrap(), Ordering::Greater);
    }

    #[test]
    fn enumerate_counts_truncation() {
        // Sum of b^k over k <= alpha.
        assert_eq!(enumerate(2, 3).len(), 1 + 3 + 9);
        assert_eq!(enumerate(4, 2).len(), 1 + 2 + 4 + 8 + 16);
        assert_eq!(enumerate(0, 3).len(), 1);
        // Lex order of the 13 nodes of alpha=2, branching=3 is strict.
        let nodes = enumerate(2, 3);
        assert_eq!(nodes.len(), 13);
        for i in 0..nodes.len() {
            for j in 0..nodes.len() {
                let cmp = lex_cmp(&nodes[i], &nodes[j]).unwrap();
                match i.cmp(&j) {
                    Ordering::Equal => assert_eq!(cmp, Ordering::Equal),
                    _ => assert_ne!(cmp, Ordering::Equal),
                }
            }
        }
    }

    #[test]
    fn restrict_examples() {
        // Full level set gives the whole truncation.
        for n in 0..=3u32 {
            for b in 1..=3u32 {
                let w = LevelSet::new(n, 0..n).unwrap();
                assert_eq!(restrict(n, &w, b).len(), enumerate(n, b).len());
            }
        }
        // Empty level set leaves only the root.
        let w = LevelSet::new(3, []).unwrap();
        let nodes = restrict(3, &w, 2);
        assert_eq!(nodes, vec![TreeNode::root(3)]);
        // alpha=3, w={0,2}, branching=2: seven nodes.
        let w = LevelSet::new(3, [0, 2]).unwrap();
        let nodes = restrict(3, &w, 2);
        assert_eq!(nodes.len(), 7);
        for eta in &nodes {
            assert!(eta.is_root() || w.contains(eta.start()));
            assert!(eta.value(1).map_or(true, |v| v == 0));
        }
    }

    #[test]
    fn concat_examples() {
        // Appending zero to an all-zeros node stays on the zero path.
        let z1 = zeta(1, 2).unwrap();
        assert_eq!(concat_low(&z1, 0).unwrap(), zeta(0, 2).unwrap());
        // Root of the 0-level tree gains a bottom entry.
        let root0 = TreeNode::root(0);
        let got = concat_high(0, &root0);
        assert_eq!(got, zeta(0, 1).unwrap());
        assert_eq!(got.to_string(), "⟨0⟩@1");
        // Explicit map union.
        let eta = node(3, 2, &[(2, 1)]);
        assert_eq!(concat_low(&eta, 4).unwrap(), node(3, 1, &[(2, 1), (1, 4)]));
        // No room below a full-domain node.
        let full = node(2, 0, &[]);
        assert!(matches!(concat_low(&full, 1), Err(TreeError::NoRoomBelow)));
    }

    #[test]
    fn iota_examples() {
        for eta in enumerate(2, 2) {
            assert_eq!(iota(2, 2, &eta).unwrap(), eta);
        }
        let eta = node(1, 0, &[(0, 2)]);
        assert_eq!(iota(1, 3, &eta).unwrap(), node(3, 0, &[(0, 2)]));
        assert!(iota(3, 1, &TreeNode::root(3)).is_err());
    }

    #[test]
    fn iota_composes() {
        for eta in enumerate(2, 3) {
            for beta in 2..=4u32 {
                for gamma in beta..=4u32 {
                    let one_step = iota(2, gamma, &eta).unwrap();
                    let two_step = iota(beta, gamma, &iota(2, beta, &eta).unwrap()).unwrap();
                    assert_eq!(one_step, two_step);
                }
            }
        }
    }

    #[test]
    fn display_parse_round_trip() {
        for eta in enumerate(3, 3) {
            let text = eta.to_string();
            assert_eq!(TreeNode::parse(&text).unwrap(), eta);
        }
        assert_eq!(
            TreeNode::parse("<2,0,0>@3").unwrap(),
            node(3, 0, &[(2, 2)])
        );
        assert_eq!(TreeNode::parse("⟨⟩@4").unwrap(), TreeNode::root(4));
        assert!(TreeNode::parse("junk").is_err());
    }

    #[test]
    fn word_round_trip() {
        for eta in enumerate(4, 2) {
            assert_eq!(
                TreeNode::from_word(4, &eta.word()).unwrap(),
                eta
            );
        }
    }
}
