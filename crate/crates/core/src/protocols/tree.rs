//! Private-coin two-party protocol trees.
//!
//! Each internal node belongs to Alice or Bob and stores, for every input
//! value of its owner, the exact probability of sending bit 1. Set-Int inputs
//! over `[n]` are encoded as integers `v = Σ_i a_i 2^i`; see [`set_int_input`].
//!
//! Text form:
//! `(protocol <alice-inputs> <bob-inputs> <node>)` with
//! `<node> = (leaf) | (leaf <out>) | (alice|bob <p_0> … <p_{m-1}> <zero> <one>)`
//! and each probability written `num/den`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{parse_err, Error, Result};
use crate::rng::{Randomness, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Alice,
    Bob,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf {
        output: Option<u32>,
    },
    Internal {
        owner: Owner,
        prob_one: Vec<BigRational>,
        zero: Box<Node>,
        one: Box<Node>,
    },
}

impl Node {
    pub fn leaf() -> Node {
        Node::Leaf { output: None }
    }

    pub fn internal(owner: Owner, prob_one: Vec<BigRational>, zero: Node, one: Node) -> Node {
        Node::Internal {
            owner,
            prob_one,
            zero: Box::new(zero),
            one: Box::new(one),
        }
    }

    fn count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Internal { zero, one, .. } => 1 + zero.count() + one.count(),
        }
    }

    fn count_leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Internal { zero, one, .. } => zero.count_leaves() + one.count_leaves(),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Internal { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }
}

/// A leaf reached by a transcript, in depth-first (zero before one) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafInfo {
    pub path: Vec<bool>,
    pub output: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolTree {
    alice_inputs: usize,
    bob_inputs: usize,
    root: Node,
}

impl ProtocolTree {
    pub fn new(alice_inputs: usize, bob_inputs: usize, root: Node) -> Result<Self> {
        if alice_inputs == 0 || bob_inputs == 0 {
            return Err(Error::InvalidSize("input domains must be non-empty".into()));
        }
        check_node(&root, alice_inputs, bob_inputs)?;
        Ok(ProtocolTree {
            alice_inputs,
            bob_inputs,
            root,
        })
    }

    /// The protocol that sends nothing.
    pub fn silent(alice_inputs: usize, bob_inputs: usize) -> Self {
        ProtocolTree::new(alice_inputs, bob_inputs, Node::leaf()).expect("valid")
    }

    /// Set-Int protocol on `[n]` in which Alice announces `a_c` for each listed
    /// coordinate `c`, in order.
    pub fn alice_reveals(n: usize, coords: &[usize]) -> Result<Self> {
        if coords.iter().any(|&c| c >= n) {
            return Err(Error::Domain("coordinate outside [n]".into()));
        }
        let domain = set_int_domain(n)?;
        fn build(coords: &[usize], domain: usize) -> Node {
            match coords.split_first() {
                None => Node::leaf(),
                Some((&c, rest)) => {
                    let probs = (0..domain)
                        .map(|v| if v >> c & 1 == 1 { BigRational::one() } else { BigRational::zero() })
                        .collect();
                    Node::internal(Owner::Alice, probs, build(rest, domain), build(rest, domain))
                }
            }
        }
        ProtocolTree::new(domain, domain, build(coords, domain))
    }

    pub fn alice_inputs(&self) -> usize {
        self.alice_inputs
    }

    pub fn bob_inputs(&self) -> usize {
        self.bob_inputs
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    /// Worst-case number of bits sent.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn leaves(&self) -> Vec<LeafInfo> {
        fn walk(node: &Node, path: &mut Vec<bool>, out: &mut Vec<LeafInfo>) {
            match node {
                Node::Leaf { output } => out.push(LeafInfo {
                    path: path.clone(),
                    output: *output,
                }),
                Node::Internal { zero, one, .. } => {
                    path.push(false);
                    walk(zero, path, out);
                    path.pop();
                    path.push(true);
                    walk(one, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// `Pr(leaf | x, y)` for every leaf, in [`ProtocolTree::leaves`] order.
    pub fn leaf_distribution(&self, x: usize, y: usize) -> Result<Vec<BigRational>> {
        self.check_inputs(x, y)?;
        fn walk(node: &Node, x: usize, y: usize, acc: BigRational, out: &mut Vec<BigRational>) {
            match node {
                Node::Leaf { .. } => out.push(acc),
                Node::Internal {
                    owner,
                    prob_one,
                    zero,
                    one,
                } => {
                    let p = &prob_one[match owner {
                        Owner::Alice => x,
                        Owner::Bob => y,
                    }];
                    walk(zero, x, y, &acc * (BigRational::one() - p), out);
                    walk(one, x, y, acc * p, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, x, y, BigRational::one(), &mut out);
        Ok(out)
    }

    /// Runs the protocol, with Alice and Bob flipping coins on their private
    /// streams. Returns the index of the reached leaf.
    pub fn run(&self, x: usize, y: usize, rng: &mut dyn Randomness) -> Result<usize> {
        self.check_inputs(x, y)?;
        let mut node = &self.root;
        let mut index = 0;
        loop {
            match node {
                Node::Leaf { .. } => return Ok(index),
                Node::Internal {
                    owner,
                    prob_one,
                    zero,
                    one,
                } => {
                    let (input, stream) = match owner {
                        Owner::Alice => (x, Stream::Alice),
                        Owner::Bob => (y, Stream::Bob),
                    };
                    if rng.bernoulli(stream, &prob_one[input]) {
                        index += zero.count_leaves();
                        node = one;
                    } else {
                        node = zero;
                    }
                }
            }
        }
    }

    pub fn check_inputs(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.alice_inputs || y >= self.bob_inputs {
            return Err(Error::Domain(format!(
                "input ({x}, {y}) outside domain {}x{}",
                self.alice_inputs, self.bob_inputs
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        fn node_text(node: &Node, out: &mut String) {
            match node {
                Node::Leaf { output: None } => out.push_str("(leaf)"),
                Node::Leaf { output: Some(o) } => out.push_str(&format!("(leaf {o})")),
                Node::Internal {
                    owner,
                    prob_one,
                    zero,
                    one,
                } => {
                    out.push('(');
                    out.push_str(match owner {
                        Owner::Alice => "alice",
                        Owner::Bob => "bob",
                    });
                    for p in prob_one {
                        out.push_str(&format!(" {}/{}", p.numer(), p.denom()));
                    }
                    out.push(' ');
                    node_text(zero, out);
                    out.push(' ');
                    node_text(one, out);
                    out.push(')');
                }
            }
        }
        let mut out = format!("(protocol {} {} ", self.alice_inputs, self.bob_inputs);
        node_text(&self.root, &mut out);
        out.push(')');
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let sexp = Sexp::parse(text)?;
        let items = sexp.list("protocol form")?;
        match items {
            [Sexp::Atom(head), alice, bob, root] if head == "protocol" => {
                let alice = alice.atom()?.parse().map_err(|_| parse_err(1, "bad alice domain"))?;
                let bob = bob.atom()?.parse().map_err(|_| parse_err(1, "bad bob domain"))?;
                let root = parse_node(root)?;
                ProtocolTree::new(alice, bob, root)
            }
            _ => Err(parse_err(1, "expected (protocol <alice> <bob> <node>)")),
        }
    }
}

fn check_node(node: &Node, alice: usize, bob: usize) -> Result<()> {
    match node {
        Node::Leaf { .. } => Ok(()),
        Node::Internal {
            owner,
            prob_one,
            zero,
            one,
        } => {
            let want = match owner {
                Owner::Alice => alice,
                Owner::Bob => bob,
            };
            if prob_one.len() != want {
                return Err(Error::Dimension(format!(
                    "node has {} probabilities for a domain of {want}",
                    prob_one.len()
                )));
            }
            if prob_one.iter().any(|p| p < &BigRational::zero() || p > &BigRational::one()) {
                return Err(Error::Validation("node probability outside [0, 1]".into()));
            }
            check_node(zero, alice, bob)?;
            check_node(one, alice, bob)
        }
    }
}

/// Input domain size `2^n` of a Set-Int protocol on `[n]`.
pub fn set_int_domain(n: usize) -> Result<usize> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidSize(format!("Set-Int protocol universe {n} not in 1..=20")));
    }
    Ok(1 << n)
}

/// Encodes a characteristic vector as the integer `Σ_i bits[i] 2^i`.
pub fn set_int_input(bits: &[bool]) -> usize {
    bits.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
}

#[derive(Debug)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    fn parse(text: &str) -> Result<Sexp> {
        let mut tokens = Vec::new();
        let mut atom = String::new();
        for c in text.chars() {
            if c == '(' || c == ')' || c.is_whitespace() {
                if !atom.is_empty() {
                    tokens.push(std::mem::take(&mut atom));
                }
                if !c.is_whitespace() {
                    tokens.push(c.to_string());
                }
            } else {
                atom.push(c);
            }
        }
        if !atom.is_empty() {
            tokens.push(atom);
        }
        let mut pos = 0;
        let sexp = Sexp::read(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(parse_err(1, "trailing tokens after protocol"));
        }
        Ok(sexp)
    }

    fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
        let tok = tokens.get(*pos).ok_or_else(|| parse_err(1, "unexpected end of input"))?;
        *pos += 1;
        match tok.as_str() {
            "(" => {
                let mut items = Vec::new();
                loop {
                    match tokens.get(*pos).map(String::as_str) {
                        Some(")") => {
                            *pos += 1;
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(Sexp::read(tokens, pos)?),
                        None => return Err(parse_err(1, "unbalanced parentheses")),
                    }
                }
            }
            ")" => Err(parse_err(1, "unexpected `)`")),
            _ => Ok(Sexp::Atom(tok.clone())),
        }
    }

    fn atom(&self) -> Result<&str> {
        match self {
            Sexp::Atom(a) => Ok(a),
            Sexp::List(_) => Err(parse_err(1, "expected an atom")),
        }
    }

    fn list(&self, what: &str) -> Result<&[Sexp]> {
        match self {
            Sexp::List(items) => Ok(items),
            Sexp::Atom(_) => Err(parse_err(1, format!("expected {what}"))),
        }
    }
}

fn parse_node(sexp: &Sexp) -> Result<Node> {
    let items = sexp.list("a node")?;
    let head = items.first().ok_or_else(|| parse_err(1, "empty node"))?.atom()?;
    match head {
        "leaf" => match &items[1..] {
            [] => Ok(Node::leaf()),
            [out] => Ok(Node::Leaf {
                output: Some(out.atom()?.parse().map_err(|_| parse_err(1, "bad leaf output"))?),
            }),
            _ => Err(parse_err(1, "leaf takes at most one output")),
        },
        "alice" | "bob" => {
            if items.len() < 3 {
                return Err(parse_err(1, "internal node needs two children"));
            }
            let owner = if head == "alice" { Owner::Alice } else { Owner::Bob };
            let probs = items[1..items.len() - 2]
                .iter()
                .map(|s| parse_ratio(s.atom()?))
                .collect::<Result<Vec<_>>>()?;
            let zero = parse_node(&items[items.len() - 2])?;
            let one = parse_node(&items[items.len() - 1])?;
            Ok(Node::internal(owner, probs, zero, one))
        }
        _ => Err(parse_err(1, format!("unknown node kind `{head}`"))),
    }
}

pub(crate) fn parse_ratio(s: &str) -> Result<BigRational> {
    let (num, den) = s.split_once('/').ok_or_else(|| parse_err(1, format!("expected num/den, got `{s}`")))?;
    let num: BigInt = num.parse().map_err(|_| parse_err(1, "bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| parse_err(1, "bad denominator"))?;
    if den.is_zero() {
        return Err(parse_err(1, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededCoins;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn text_round_trip() {
        let root = Node::internal(
            Owner::Alice,
            vec![half(), BigRational::one()],
            Node::Leaf { output: Some(1) },
            Node::internal(Owner::Bob, vec![BigRational::zero(); 3], Node::leaf(), Node::leaf()),
        );
        let tree = ProtocolTree::new(2, 3, root).unwrap();
        let text = tree.to_text();
        assert_eq!(text, "(protocol 2 3 (alice 1/2 1/1 (leaf 1) (bob 0/1 0/1 0/1 (leaf) (leaf))))");
        assert_eq!(ProtocolTree::parse(&text).unwrap(), tree);
        assert_eq!((tree.node_count(), tree.depth(), tree.leaves().len()), (5, 2, 3));
    }

    #[test]
    fn rejects_bad_trees() {
        let bad = Node::internal(Owner::Bob, vec![half()], Node::leaf(), Node::leaf());
        assert!(matches!(ProtocolTree::new(2, 2, bad), Err(Error::Dimension(_))));
        assert!(ProtocolTree::parse("(protocol 1 1 (alice 3/2 (leaf) (leaf)))").is_err());
        assert!(ProtocolTree::parse("(protocol 1 1 (leaf)").is_err());
    }

    #[test]
    fn leaf_distribution_and_run_agree_on_deterministic_tree() {
        let tree = ProtocolTree::alice_reveals(2, &[0, 1]).unwrap();
        assert_eq!(tree.node_count(), 7);
        let x = set_int_input(&[true, false]);
        let dist = tree.leaf_distribution(x, 0).unwrap();
        let hit = tree.run(x, 0, &mut SeededCoins::new(1)).unwrap();
        assert!(dist[hit].is_one());
        assert_eq!(tree.leaves()[hit].path, vec![true, false]);
    }
}
