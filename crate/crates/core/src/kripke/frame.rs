use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Largest world count a frame may have (worlds are bits of a `u32`).
pub const MAX_WORLDS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Logic {
    /// The base logic: no condition beyond the two frame conditions.
    IelMinus,
    /// Adds seriality of the knowledge relation.
    Iel,
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iel-" | "IEL-" => Ok(Logic::IelMinus),
            "iel" | "IEL" => Ok(Logic::Iel),
            other => Err(format!(
                "unknown logic `{other}` (expected `iel-` or `iel`)"
            )),
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::IelMinus => "iel-",
            Logic::Iel => "iel",
        })
    }
}

/// A finite frame `<W, <=, E>` with worlds `0..n`. `up[w]` is the set of
/// worlds above `w` and `e[w]` the knowledge successors of `w`, both as
/// bitmasks. Frames are not validated on construction; see
/// [`Frame::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    n: usize,
    up: Vec<u32>,
    e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum FrameViolation {
    #[error("order is not reflexive at world {0}")]
    NotReflexive(usize),
    #[error("order is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("knowledge successor {succ} of world {world} is not above it")]
    OutsideCone { world: usize, succ: usize },
    #[error("{lower} <= {upper} but knowledge successor {succ} of {upper} is not one of {lower}")]
    NotAntitone {
        lower: usize,
        upper: usize,
        succ: usize,
    },
    #[error("world {0} has no knowledge successor")]
    NotSerial(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("frame is invalid: {0}")]
    Invalid(FrameViolation),
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

impl Frame {
    /// A frame from raw relation masks.
    pub fn from_masks(up: Vec<u32>, e: Vec<u32>) -> Frame {
        assert_eq!(up.len(), e.len());
        assert!(up.len() <= MAX_WORLDS);
        Frame { n: up.len(), up, e }
    }

    /// A frame whose order is the reflexive-transitive closure of
    /// `leq_edges`.
    pub fn from_edges(n: usize, leq_edges: &[(usize, usize)], e_edges: &[(usize, usize)]) -> Frame {
        assert!(n <= MAX_WORLDS);
        let mut up: Vec<u32> = (0..n).map(|w| 1 << w).collect();
        for &(a, b) in leq_edges {
            up[a] |= 1 << b;
        }
        loop {
            let mut changed = false;
            for w in 0..n {
                let mut acc = up[w];
                for u in bits(up[w]) {
                    acc |= up[u];
                }
                if acc != up[w] {
                    up[w] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut e = vec![0u32; n];
        for &(a, b) in e_edges {
            e[a] |= 1 << b;
        }
        Frame { n, up, e }
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn leq(&self, w: usize, u: usize) -> bool {
        self.up[w] & (1 << u) != 0
    }

    pub fn knows(&self, w: usize, u: usize) -> bool {
        self.e[w] & (1 << u) != 0
    }

    pub fn up(&self, w: usize) -> u32 {
        self.up[w]
    }

    pub fn e(&self, w: usize) -> u32 {
        self.e[w]
    }

    pub fn is_up_set(&self, set: u32) -> bool {
        bits(set).all(|w| self.up[w] & !set == 0)
    }

    /// All up-sets in increasing numeric order.
    pub fn up_sets(&self) -> Vec<u32> {
        (0..=self.all()).filter(|&s| self.is_up_set(s)).collect()
    }

    /// Order axioms, the two frame conditions, and seriality for `Iel`.
    pub fn validate(&self, logic: Logic) -> Result<(), FrameViolation> {
        let n = self.n;
        for w in 0..n {
            if !self.leq(w, w) {
                return Err(FrameViolation::NotReflexive(w));
            }
        }
        for a in 0..n {
            for b in bits(self.up[a]) {
                if a != b && self.leq(b, a) {
                    return Err(FrameViolation::NotAntisymmetric(a.min(b), a.max(b)));
                }
                if let Some(c) = bits(self.up[b] & !self.up[a]).next() {
                    return Err(FrameViolation::NotTransitive(a, b, c));
                }
            }
        }
        for w in 0..n {
            if let Some(u) = bits(self.e[w] & !self.up[w]).next() {
                return Err(FrameViolation::OutsideCone { world: w, succ: u });
            }
        }
        for w in 0..n {
            for u in bits(self.up[w]) {
                if let Some(v) = bits(self.e[u] & !self.e[w]).next() {
                    return Err(FrameViolation::NotAntitone {
                        lower: w,
                        upper: u,
                        succ: v,
                    });
                }
            }
        }
        if logic == Logic::Iel {
            if let Some(w) = (0..n).find(|&w| self.e[w] == 0) {
                return Err(FrameViolation::NotSerial(w));
            }
        }
        Ok(())
    }

    /// Pairs `(i, j)` with `i <= j`, `i != j`.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|w| {
                bits(self.up[w])
                    .filter(move |&u| u != w)
                    .map(move |u| (w, u))
            })
            .collect()
    }

    pub fn e_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|w| bits(self.e[w]).map(move |u| (w, u)))
            .collect()
    }
}

/// A frame with an up-set for each propositional letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    pub valuation: BTreeMap<String, u32>,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, u32>) -> Result<Model, String> {
        for (p, &set) in &valuation {
            if set & !frame.all() != 0 {
                return Err(format!(
                    "valuation of `{p}` mentions a world outside the frame"
                ));
            }
            if !frame.is_up_set(set) {
                return Err(format!("valuation of `{p}` is not upward closed"));
            }
        }
        Ok(Model { frame, valuation })
    }

    /// Text form: the frame followed by one `val` line per letter.
    pub fn render(&self, at: Option<usize>) -> String {
        let mut out = render_frame(&self.frame);
        for (p, &set) in &self.valuation {
            let ws: Vec<String> = bits(set).map(|w| w.to_string()).collect();
            if ws.is_empty() {
                out.push_str(&format!("val {p}:\n"));
            } else {
                out.push_str(&format!("val {p}: {}\n", ws.join(" ")));
            }
        }
        if let Some(w) = at {
            out.push_str(&format!("at: {w}\n"));
        }
        out
    }
}

pub fn render_frame(f: &Frame) -> String {
    let mut out = format!("worlds {}\n", f.worlds());
    for (a, b) in f.leq_pairs() {
        out.push_str(&format!("leq: {a} {b}\n"));
    }
    for (a, b) in f.e_pairs() {
        out.push_str(&format!("E: {a} {b}\n"));
    }
    out
}

/// A parsed frame or model file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameFile {
    pub frame: Frame,
    pub valuation: BTreeMap<String, u32>,
    pub at: Option<usize>,
}

/// Parses the text format written by [`Model::render`]:
///
/// ```text
/// worlds 2
/// leq: 0 1      # order edges; reflexive-transitive closure is taken
/// E: 0 1        # knowledge edges
/// val p: 1      # worlds where p holds
/// at: 0         # designated world
/// ```
pub fn parse_frame_file(src: &str) -> Result<FrameFile, FrameFileError> {
    let mut n = None;
    let mut leq = Vec::new();
    let mut e = Vec::new();
    let mut val: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut at = None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| FrameFileError::Syntax { line, message };
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let world_list = |s: &str| -> Result<Vec<usize>, FrameFileError> {
            s.split_whitespace()
                .map(|w| {
                    w.parse::<usize>()
                        .map_err(|_| syntax(format!("`{w}` is not a world index")))
                })
                .collect()
        };
        if let Some(rest) = text.strip_prefix("worlds") {
            let k: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax("expected `worlds N`".into()))?;
            if k == 0 || k > MAX_WORLDS {
                return Err(syntax(format!(
                    "world count must be between 1 and {MAX_WORLDS}"
                )));
            }
            n = Some(k);
        } else if let Some(rest) = text.strip_prefix("leq:") {
            match world_list(rest)?.as_slice() {
                [a, b] => leq.push((*a, *b)),
                _ => return Err(syntax("expected `leq: i j`".into())),
            }
        } else if let Some(rest) = text.strip_prefix("E:") {
            match world_list(rest)?.as_slice() {
                [a, b] => e.push((*a, *b)),
                _ => return Err(syntax("expected `E: i j`".into())),
            }
        } else if let Some(rest) = text.strip_prefix("val") {
            let (name, ws) = rest
                .split_once(':')
                .ok_or_else(|| syntax("expected `val p: i j ...`".into()))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(syntax(format!("`{name}` is not a letter name")));
            }
            val.insert(name.to_string(), world_list(ws)?);
        } else if let Some(rest) = text.strip_prefix("at:") {
            match world_list(rest)?.as_slice() {
                [w] => at = Some(*w),
                _ => return Err(syntax("expected `at: w`".into())),
            }
        } else {
            return Err(syntax(format!("unrecognised line `{text}`")));
        }
    }
    let n = n.ok_or(FrameFileError::Syntax {
        line: 1,
        message: "missing `worlds N` line".into(),
    })?;
    let out_of_range = leq
        .iter()
        .chain(&e)
        .flat_map(|&(a, b)| [a, b])
        .chain(val.values().flatten().copied())
        .chain(at)
        .find(|&w| w >= n);
    if let Some(w) = out_of_range {
        return Err(FrameFileError::Syntax {
            line: 1,
            message: format!("world {w} is out of range for {n} worlds"),
        });
    }
    let frame = Frame::from_edges(n, &leq, &e);
    frame
        .validate(Logic::IelMinus)
        .map_err(FrameFileError::Invalid)?;
    let valuation = val
        .into_iter()
        .map(|(p, ws)| (p, ws.into_iter().fold(0u32, |m, w| m | (1 << w))))
        .collect();
    Ok(FrameFile {
        frame,
        valuation,
        at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        let single = Frame::from_edges(1, &[], &[]);
        assert_eq!(single.validate(Logic::IelMinus), Ok(()));
        assert_eq!(
            single.validate(Logic::Iel),
            Err(FrameViolation::NotSerial(0))
        );
        let outside = Frame::from_edges(2, &[], &[(0, 1)]);
        assert_eq!(
            outside.validate(Logic::IelMinus),
            Err(FrameViolation::OutsideCone { world: 0, succ: 1 })
        );
        let chain = Frame::from_edges(2, &[(0, 1)], &[(0, 1), (1, 1)]);
        assert_eq!(chain.validate(Logic::IelMinus), Ok(()));
        assert_eq!(chain.validate(Logic::Iel), Ok(()));
        // E(1) = {1} but E(0) = {} although 0 <= 1
        let bad = Frame::from_edges(2, &[(0, 1)], &[(1, 1)]);
        assert!(matches!(
            bad.validate(Logic::IelMinus),
            Err(FrameViolation::NotAntitone { .. })
        ));
        let cyc = Frame::from_edges(2, &[(0, 1), (1, 0)], &[]);
        assert_eq!(
            cyc.validate(Logic::IelMinus),
            Err(FrameViolation::NotAntisymmetric(0, 1))
        );
    }

    #[test]
    fn up_sets_of_small_orders() {
        let chain = Frame::from_edges(2, &[(0, 1)], &[]);
        assert_eq!(chain.up_sets(), vec![0b00, 0b10, 0b11]);
        let anti = Frame::from_edges(2, &[], &[]);
        assert_eq!(anti.up_sets().len(), 4);
    }

    #[test]
    fn file_round_trip() {
        let src = "worlds 3\nleq: 0 1\nleq: 1 2\nE: 0 2\nE: 1 2\nE: 2 2\nval p: 2\nat: 0\n";
        let f = parse_frame_file(src).unwrap();
        assert!(f.frame.leq(0, 2), "closure is taken");
        let m = Model::new(f.frame.clone(), f.valuation.clone()).unwrap();
        let again = parse_frame_file(&m.render(f.at)).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(
            parse_frame_file("leq: 0 1\n"),
            Err(FrameFileError::Syntax { .. })
        ));
        assert!(matches!(
            parse_frame_file("worlds 2\nleq: 0 5\n"),
            Err(FrameFileError::Syntax { .. })
        ));
        assert!(matches!(
            parse_frame_file("worlds 2\nE: 0 1\n"),
            Err(FrameFileError::Invalid(FrameViolation::OutsideCone { .. }))
        ));
        assert!(matches!(
            parse_frame_file("worlds 2\nbogus\n"),
            Err(FrameFileError::Syntax { line: 2, .. })
        ));
    }
}
