//! Lossy channel systems: the model, its text format and the perfect and lossy
//! step relations.

mod reach;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::wqo::{subword_embed, Embedding};

pub use reach::{
    reach_bounded, reach_exact, reach_exact_witness, semantics_equivalence_probe, BoundedReach, UpwardClosedSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Read,
    Write,
}

impl Op {
    pub fn token(self) -> &'static str {
        match self {
            Op::Read => "?",
            Op::Write => "!",
        }
    }
}

/// `(from, channel, letter, op, to)` over indices into the declared lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instruction {
    pub from: usize,
    pub channel: usize,
    pub letter: usize,
    pub op: Op,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelSystem {
    pub states: Vec<String>,
    pub channels: Vec<String>,
    pub alphabet: Vec<String>,
    pub instructions: Vec<Instruction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: usize,
    pub words: Vec<Vec<usize>>,
}

impl Configuration {
    pub fn new(state: usize, words: Vec<Vec<usize>>) -> Self {
        Configuration { state, words }
    }

    /// Total number of letters in the channels.
    pub fn size(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }
}

/// Same state and channel-wise subword order.
impl Embedding for Configuration {
    type Key = usize;
    fn key(&self) -> usize {
        self.state
    }
    fn embeds_into(&self, other: &Self) -> bool {
        self.state == other.state
            && self.words.len() == other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| subword_embed(a, b))
    }
    fn norm(&self) -> usize {
        self.size()
    }
}

/// One step of a lossy computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Index into `instructions`.
    Perfect(usize),
    Lose { channel: usize, pos: usize },
}

impl ChannelSystem {
    pub fn new(
        states: Vec<String>,
        channels: Vec<String>,
        alphabet: Vec<String>,
        instructions: Vec<Instruction>,
    ) -> Result<Self> {
        let cs = ChannelSystem { states, channels, alphabet, instructions };
        cs.validate()?;
        Ok(cs)
    }

    fn validate(&self) -> Result<()> {
        for (what, names) in [("state", &self.states), ("channel", &self.channels), ("letter", &self.alphabet)] {
            if names.is_empty() {
                return Err(Error::InvalidInput(format!("at least one {what} is required")));
            }
            let distinct: BTreeSet<&String> = names.iter().collect();
            if distinct.len() != names.len() {
                return Err(Error::InvalidInput(format!("duplicate {what} name")));
            }
        }
        for i in &self.instructions {
            if i.from >= self.states.len()
                || i.to >= self.states.len()
                || i.channel >= self.channels.len()
                || i.letter >= self.alphabet.len()
            {
                return Err(Error::InvalidInput("instruction refers to an undeclared name".into()));
            }
        }
        Ok(())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|s| s == name)
    }

    pub fn empty_configuration(&self, state: usize) -> Configuration {
        Configuration::new(state, vec![Vec::new(); self.channels.len()])
    }

    pub fn validate_configuration(&self, c: &Configuration) -> Result<()> {
        if c.state >= self.states.len() || c.words.len() != self.channels.len() {
            return Err(Error::InvalidInput("configuration does not fit the system".into()));
        }
        if c.words.iter().flatten().any(|&a| a >= self.alphabet.len()) {
            return Err(Error::InvalidInput("configuration uses an undeclared letter".into()));
        }
        Ok(())
    }

    /// The result of one instruction, if enabled.
    pub fn apply(&self, c: &Configuration, instr: usize) -> Option<Configuration> {
        let i = self.instructions.get(instr)?;
        if c.state != i.from {
            return None;
        }
        let mut next = c.clone();
        next.state = i.to;
        let w = &mut next.words[i.channel];
        match i.op {
            Op::Read => {
                if w.first() != Some(&i.letter) {
                    return None;
                }
                w.remove(0);
            }
            Op::Write => w.push(i.letter),
        }
        Some(next)
    }

    pub fn apply_step(&self, c: &Configuration, step: Step) -> Option<Configuration> {
        match step {
            Step::Perfect(i) => self.apply(c, i),
            Step::Lose { channel, pos } => {
                let mut next = c.clone();
                let w = next.words.get_mut(channel)?;
                if pos >= w.len() {
                    return None;
                }
                w.remove(pos);
                Some(next)
            }
        }
    }

    /// Replays `steps` from `u` and checks that they end in `v`.
    pub fn validate_trace(&self, u: &Configuration, steps: &[Step], v: &Configuration) -> Result<Vec<Configuration>> {
        let mut confs = vec![u.clone()];
        for (k, s) in steps.iter().enumerate() {
            let next = self
                .apply_step(confs.last().expect("nonempty"), *s)
                .ok_or_else(|| Error::InvalidTrace(format!("step {k} ({s:?}) is not enabled")))?;
            confs.push(next);
        }
        if confs.last() != Some(v) {
            return Err(Error::InvalidTrace("trace does not end in the target configuration".into()));
        }
        Ok(confs)
    }

    pub fn show(&self, c: &Configuration) -> String {
        let words: Vec<String> = c
            .words
            .iter()
            .map(|w| w.iter().map(|&a| self.alphabet[a].as_str()).collect::<Vec<_>>().join(" "))
            .collect();
        let body = words.join(" ; ");
        if body.trim().is_empty() && c.words.len() == 1 {
            format!("{} :", self.states[c.state])
        } else {
            format!("{} : {}", self.states[c.state], body).trim_end().to_string()
        }
    }

    pub fn show_instruction(&self, i: &Instruction) -> String {
        format!(
            "{} {} {} {} {}",
            self.states[i.from],
            self.channels[i.channel],
            self.alphabet[i.letter],
            i.op.token(),
            self.states[i.to]
        )
    }

    pub fn show_step(&self, s: &Step) -> String {
        match s {
            Step::Perfect(i) => self.show_instruction(&self.instructions[*i]),
            Step::Lose { channel, pos } => format!("lose {}[{pos}]", self.channels[*channel]),
        }
    }

    /// Configuration literal `q1 : a a ; b`, channels in declared order.
    pub fn parse_configuration(&self, text: &str) -> Result<Configuration> {
        let (state, body) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(1, format!("configuration `{text}` lacks `:`")))?;
        let state = state.trim();
        let state = self.state_index(state).ok_or_else(|| Error::parse(1, format!("unknown state `{state}`")))?;
        let segments: Vec<&str> = body.split(';').collect();
        if segments.len() != self.channels.len() {
            return Err(Error::parse(
                1,
                format!("expected {} channel segments, found {}", self.channels.len(), segments.len()),
            ));
        }
        let mut words = Vec::with_capacity(segments.len());
        for seg in segments {
            let mut w = Vec::new();
            for letter in seg.split_whitespace() {
                w.push(
                    self.letter_index(letter)
                        .ok_or_else(|| Error::parse(1, format!("unknown letter `{letter}`")))?,
                );
            }
            words.push(w);
        }
        Ok(Configuration::new(state, words))
    }

    /// Successors by one read or write, with the instruction used.
    pub fn step_perfect(&self, c: &Configuration) -> Vec<(Configuration, usize)> {
        (0..self.instructions.len()).filter_map(|i| self.apply(c, i).map(|n| (n, i))).collect()
    }
}

/// All configurations obtained by deleting one letter.
pub fn step_lossy(c: &Configuration) -> Vec<Configuration> {
    let mut out = BTreeSet::new();
    for (ch, w) in c.words.iter().enumerate() {
        for pos in 0..w.len() {
            let mut next = c.clone();
            next.words[ch].remove(pos);
            out.insert(next);
        }
    }
    out.into_iter().collect()
}

/// Deletions turning `from` into `to`, right to left per channel.
pub fn loss_steps(from: &Configuration, to: &Configuration) -> Option<Vec<Step>> {
    if !to.embeds_into(from) {
        return None;
    }
    let mut steps = Vec::new();
    for (ch, (big, small)) in from.words.iter().zip(&to.words).enumerate() {
        let keep = crate::wqo::embedding_positions(small, big)?;
        for pos in (0..big.len()).rev() {
            if !keep.contains(&pos) {
                steps.push(Step::Lose { channel: ch, pos });
            }
        }
    }
    Some(steps)
}

/// A system with optional source and target configurations, as stored in
/// instance files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsInstance {
    pub system: ChannelSystem,
    pub init: Option<Configuration>,
    pub target: Option<Configuration>,
}

fn header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key).and_then(|r| r.strip_prefix(':'))
}

/// The LCS text format; `#` starts a comment.
pub fn parse_lcs(text: &str) -> Result<LcsInstance> {
    let mut states = None;
    let mut channels = None;
    let mut alphabet = None;
    let mut raw_instr = Vec::new();
    let mut raw_init = None;
    let mut raw_target = None;
    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let names = |r: &str| r.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        if let Some(r) = header(line, "states") {
            states = Some(names(r));
        } else if let Some(r) = header(line, "channels") {
            channels = Some(names(r));
        } else if let Some(r) = header(line, "alphabet") {
            alphabet = Some(names(r));
        } else if let Some(r) = header(line, "init") {
            raw_init = Some((lineno, r.trim().to_string()));
        } else if let Some(r) = header(line, "target") {
            raw_target = Some((lineno, r.trim().to_string()));
        } else {
            raw_instr.push((lineno, line.to_string()));
        }
    }
    let states = states.ok_or_else(|| Error::parse(0, "missing `states:` header"))?;
    let channels = channels.ok_or_else(|| Error::parse(0, "missing `channels:` header"))?;
    let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `alphabet:` header"))?;
    let mut cs = ChannelSystem { states, channels, alphabet, instructions: Vec::new() };
    for (lineno, line) in raw_instr {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [from, ch, letter, op, to] = parts.as_slice() else {
            return Err(Error::parse(lineno, format!("malformed instruction `{line}`")));
        };
        let look = |idx: Option<usize>, what: &str, name: &str| {
            idx.ok_or_else(|| Error::parse(lineno, format!("unknown {what} `{name}`")))
        };
        let op = match *op {
            "?" => Op::Read,
            "!" => Op::Write,
            other => return Err(Error::parse(lineno, format!("unknown operation `{other}`"))),
        };
        cs.instructions.push(Instruction {
            from: look(cs.state_index(from), "state", from)?,
            channel: look(cs.channel_index(ch), "channel", ch)?,
            letter: look(cs.letter_index(letter), "letter", letter)?,
            op,
            to: look(cs.state_index(to), "state", to)?,
        });
    }
    cs.validate().map_err(|e| Error::parse(0, e.to_string()))?;
    let conf = |raw: Option<(usize, String)>| -> Result<Option<Configuration>> {
        raw.map(|(lineno, text)| {
            cs.parse_configuration(&text).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(lineno, message),
                other => other,
            })
        })
        .transpose()
    };
    let init = conf(raw_init)?;
    let target = conf(raw_target)?;
    Ok(LcsInstance { system: cs, init, target })
}

impl fmt::Display for ChannelSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "channels: {}", self.channels.join(" "))?;
        writeln!(f, "alphabet: {}", self.alphabet.join(" "))?;
        for i in &self.instructions {
            writeln!(f, "{}", self.show_instruction(i))?;
        }
        Ok(())
    }
}

impl fmt::Display for LcsInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.system)?;
        if let Some(u) = &self.init {
            writeln!(f, "init: {}", self.system.show(u))?;
        }
        if let Some(v) = &self.target {
            writeln!(f, "target: {}", self.system.show(v))?;
        }
        Ok(())
    }
}

/// The two-channel system of the introduction: a single read of `a` on `c1`.
pub fn intro_system() -> ChannelSystem {
    parse_lcs("states: q1 q2\nchannels: c1 c2\nalphabet: a b\nq1 c1 a ? q2\n").expect("well formed").system
}
