//! Interned hierarchical labels.
//!
//! A label is either a bare integer (an input value) or a sorted map
//! from process id to label (a heard-of view: who was received from,
//! and what their state was). Labels are globally interned: equality
//! and hashing are O(1) id comparisons, so deep histories cost nothing
//! to compare, merge, or dedupe.
//!
//! Ordering is structural, not interning-order: integers before maps,
//! integers by value, maps lexicographically by (process, sub-label).
//! Structural order is stable across runs and across thread schedules,
//! which keeps every downstream sort reproducible.
//!
//! The canonical text form round-trips through [`parse_label`]:
//! `INT` or `{p:LABEL,p:LABEL,...}` with keys ascending, e.g.
//! `{1:{1:1,2:2},3:{3:2}}`.

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{usage, Result};
use crate::graph::{NodeSet, ProcessId};

#[derive(Debug, PartialEq, Eq)]
pub enum LabelNode {
    Int(i64),
    Pairs(Vec<(ProcessId, Label)>),
}

#[derive(Clone)]
pub struct Label {
    id: u32,
    node: Arc<LabelNode>,
    canon: Arc<str>,
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Label {}

impl std::hash::Hash for Label {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.id == other.id {
            return Ordering::Equal;
        }
        match (self.node.as_ref(), other.node.as_ref()) {
            (LabelNode::Int(a), LabelNode::Int(b)) => a.cmp(b),
            (LabelNode::Int(_), LabelNode::Pairs(_)) => Ordering::Less,
            (LabelNode::Pairs(_), LabelNode::Int(_)) => Ordering::Greater,
            (LabelNode::Pairs(a), LabelNode::Pairs(b)) => {
                for ((pa, la), (pb, lb)) in a.iter().zip(b.iter()) {
                    let c = pa.cmp(pb).then_with(|| la.cmp(lb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                a.len().cmp(&b.len())
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canon)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canon)
    }
}

static INTERNER: Lazy<Mutex<HashMap<Arc<str>, Label>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn intern(canon: String, node: LabelNode) -> Label {
    let mut table = INTERNER.lock().expect("interner poisoned");
    if let Some(l) = table.get(canon.as_str()) {
        return l.clone();
    }
    let canon: Arc<str> = canon.into();
    let label = Label {
        id: u32::try_from(table.len()).expect("interner overflow"),
        node: Arc::new(node),
        canon: canon.clone(),
    };
    table.insert(canon, label.clone());
    label
}

impl Label {
    #[must_use]
    pub fn int(v: i64) -> Label {
        intern(v.to_string(), LabelNode::Int(v))
    }

    /// Map label; keys must be distinct (sorted internally).
    pub fn pairs(mut entries: Vec<(ProcessId, Label)>) -> Result<Label> {
        entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(usage("duplicate process key in label".to_string()));
        }
        let mut canon = String::from("{");
        for (i, (p, l)) in entries.iter().enumerate() {
            if i > 0 {
                canon.push(',');
            }
            canon.push_str(&format!("{p}:{l}"));
        }
        canon.push('}');
        Ok(intern(canon, LabelNode::Pairs(entries)))
    }

    #[must_use]
    pub fn node(&self) -> &LabelNode {
        &self.node
    }

    /// The value of an integer label, if this is one.
    #[must_use]
    pub fn as_int(&self) -> Option<i64> {
        match self.node.as_ref() {
            LabelNode::Int(v) => Some(*v),
            LabelNode::Pairs(_) => None,
        }
    }

    #[must_use]
    pub fn canon(&self) -> &str {
        &self.canon
    }

    /// Top-level senders of a map label; empty for an integer label.
    #[must_use]
    pub fn names(&self) -> NodeSet {
        match self.node.as_ref() {
            LabelNode::Int(_) => NodeSet::empty(),
            LabelNode::Pairs(entries) => entries.iter().map(|(p, _)| *p).collect(),
        }
    }

    /// Sub-label for sender `p`, when this is a map label containing it.
    #[must_use]
    pub fn get(&self, p: ProcessId) -> Option<&Label> {
        match self.node.as_ref() {
            LabelNode::Int(_) => None,
            LabelNode::Pairs(entries) => entries
                .binary_search_by(|(q, _)| q.cmp(&p))
                .ok()
                .map(|i| &entries[i].1),
        }
    }

    /// All distinct integer leaves, ascending.
    #[must_use]
    pub fn leaf_values(&self) -> Vec<i64> {
        fn walk(l: &Label, out: &mut Vec<i64>) {
            match l.node.as_ref() {
                LabelNode::Int(v) => out.push(*v),
                LabelNode::Pairs(entries) => {
                    for (_, sub) in entries {
                        walk(sub, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Nesting depth: 0 for an integer, 1 + max child depth for a map.
    #[must_use]
    pub fn depth(&self) -> usize {
        match self.node.as_ref() {
            LabelNode::Int(_) => 0,
            LabelNode::Pairs(entries) => {
                1 + entries.iter().map(|(_, l)| l.depth()).max().unwrap_or(0)
            }
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.canon)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        parse_label(&s).map_err(|e| D::Error::custom(e.to_string()))
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(usage(format!(
                "label parse: expected '{}' at byte {}",
                b as char, self.pos
            )))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse()
            .map_err(|_| usage(format!("label parse: bad integer at byte {start}")))
    }

    fn label(&mut self) -> Result<Label> {
        if self.peek() == Some(b'{') {
            self.pos += 1;
            let mut entries = Vec::new();
            if self.peek() == Some(b'}') {
                self.pos += 1;
                return Label::pairs(entries);
            }
            loop {
                let pid = self.integer()?;
                if pid < 1 {
                    return Err(usage("label parse: process ids start at 1".to_string()));
                }
                self.expect(b':')?;
                let sub = self.label()?;
                entries.push((ProcessId(pid as usize), sub));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b'}') => {
                        self.pos += 1;
                        return Label::pairs(entries);
                    }
                    _ => {
                        return Err(usage(format!(
                            "label parse: expected ',' or '}}' at byte {}",
                            self.pos
                        )))
                    }
                }
            }
        } else {
            Ok(Label::int(self.integer()?))
        }
    }
}

pub fn parse_label(text: &str) -> Result<Label> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let l = p.label()?;
    if p.pos != p.bytes.len() {
        return Err(usage(format!("label parse: trailing input at byte {}", p.pos)));
    }
    Ok(l)
}
