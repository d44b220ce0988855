use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::instances::{bits_to_string, field, parse_bits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pair {
    AB,
    CD,
}

impl Pair {
    /// Pair that speaks in phase `p` (1-based): CD in odd phases, AB in even.
    pub fn of_phase(p: usize) -> Pair {
        if p % 2 == 1 {
            Pair::CD
        } else {
            Pair::AB
        }
    }

    pub fn other(self) -> Pair {
        match self {
            Pair::AB => Pair::CD,
            Pair::CD => Pair::AB,
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::AB => "AB",
            Pair::CD => "CD",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    A,
    B,
    C,
    D,
}

impl Player {
    pub fn pair(self) -> Pair {
        match self {
            Player::A | Player::B => Pair::AB,
            Player::C | Player::D => Pair::CD,
        }
    }

    fn parse(s: &str) -> Option<Player> {
        Some(match s {
            "PA" => Player::A,
            "PB" => Player::B,
            "PC" => Player::C,
            "PD" => Player::D,
            _ => return None,
        })
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "PA",
            Player::B => "PB",
            Player::C => "PC",
            Player::D => "PD",
        })
    }
}

/// A message goes to one player, or to both players of a pair at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Recipient {
    Player(Player),
    Pair(Pair),
}

impl Recipient {
    fn pair(self) -> Pair {
        match self {
            Recipient::Player(p) => p.pair(),
            Recipient::Pair(p) => p,
        }
    }
}

impl fmt::Display for Recipient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipient::Player(p) => p.fmt(f),
            Recipient::Pair(p) => p.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    pub from: Player,
    pub to: Recipient,
    pub bits: Vec<bool>,
}

impl Message {
    /// True when the message crosses to the other pair, which ends the phase.
    pub fn is_boundary(&self) -> bool {
        self.from.pair() != self.to.pair()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub pair: Pair,
    pub messages: Vec<Message>,
}

/// Phase-structured transcript of a four-party HPC protocol. Phase `p` is
/// stored at index `p - 1`; a phase with no messages was skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PhaseTranscript {
    phases: Vec<Phase>,
}

impl PhaseTranscript {
    pub fn new() -> Self {
        PhaseTranscript::default()
    }

    pub fn from_phases(phases: Vec<Phase>) -> Result<Self> {
        let t = PhaseTranscript { phases };
        t.validate()?;
        Ok(t)
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn phase_count(&self) -> usize {
        self.phases.len()
    }

    pub fn total_bits(&self) -> usize {
        self.messages().map(|(_, m)| m.bits.len()).sum()
    }

    pub fn message_count(&self) -> usize {
        self.messages().count()
    }

    /// `(phase number, message)` in order.
    pub fn messages(&self) -> impl Iterator<Item = (usize, &Message)> {
        self.phases
            .iter()
            .enumerate()
            .flat_map(|(p, ph)| ph.messages.iter().map(move |m| (p + 1, m)))
    }

    /// Opens the next phase; its pair is fixed by the phase parity.
    pub fn open_phase(&mut self) -> usize {
        let p = self.phases.len() + 1;
        self.phases.push(Phase {
            pair: Pair::of_phase(p),
            messages: Vec::new(),
        });
        p
    }

    pub fn send(&mut self, from: Player, to: Recipient, bits: Vec<bool>) {
        let phase = self.phases.last_mut().expect("open a phase before sending");
        phase.messages.push(Message { from, to, bits });
    }

    /// Keeps the first `j` phases.
    pub fn truncated(&self, j: usize) -> PhaseTranscript {
        PhaseTranscript {
            phases: self.phases.iter().take(j).cloned().collect(),
        }
    }

    /// Checks the phase rules from the transcript alone: pairs alternate
    /// starting with CD, only the active pair speaks, a cross-pair message is
    /// always the last message of its phase, and every phase that is followed
    /// by communication ended with such a message.
    pub fn validate(&self) -> Result<()> {
        let last_active = self.phases.iter().rposition(|p| !p.messages.is_empty());
        for (idx, phase) in self.phases.iter().enumerate() {
            let p = idx + 1;
            if phase.pair != Pair::of_phase(p) {
                return Err(Error::Validation(format!("phase {p} is tagged {}", phase.pair)));
            }
            for (m_idx, m) in phase.messages.iter().enumerate() {
                if m.from.pair() != phase.pair {
                    return Err(Error::Validation(format!(
                        "{} speaks in phase {p} of pair {}",
                        m.from, phase.pair
                    )));
                }
                let last = m_idx + 1 == phase.messages.len();
                if m.is_boundary() && !last {
                    return Err(Error::Validation(format!(
                        "phase {p} continues after a cross-pair message"
                    )));
                }
            }
            let later_talk = last_active.is_some_and(|l| l > idx);
            if later_talk {
                if let Some(m) = phase.messages.last() {
                    if !m.is_boundary() {
                        return Err(Error::Validation(format!(
                            "phase {p} is followed by communication but never crossed pairs"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// One line per message: `phase=<p> pair=<AB|CD> from=<P?> to=<P?|AB|CD> bits=<bits>`.
    pub fn to_text(&self) -> String {
        self.messages()
            .map(|(p, m)| {
                format!(
                    "phase={} pair={} from={} to={} bits={}\n",
                    p,
                    Pair::of_phase(p),
                    m.from,
                    m.to,
                    bits_to_string(&m.bits)
                )
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = PhaseTranscript::new();
        for (idx, line) in text.lines().enumerate() {
            let lno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let get = |i: usize, key: &str| field(tok.get(i).copied(), key, lno);
            let p: usize = get(0, "phase")?.parse().map_err(|_| parse_err(lno, "bad phase"))?;
            if p == 0 || p < t.phase_count() {
                return Err(parse_err(lno, "phases must be positive and non-decreasing"));
            }
            let pair = match get(1, "pair")? {
                "AB" => Pair::AB,
                "CD" => Pair::CD,
                _ => return Err(parse_err(lno, "bad pair")),
            };
            if pair != Pair::of_phase(p) {
                return Err(parse_err(lno, "pair tag does not match phase parity"));
            }
            let from = Player::parse(get(2, "from")?).ok_or_else(|| parse_err(lno, "bad sender"))?;
            let to = match get(3, "to")? {
                "AB" => Recipient::Pair(Pair::AB),
                "CD" => Recipient::Pair(Pair::CD),
                s => Recipient::Player(Player::parse(s).ok_or_else(|| parse_err(lno, "bad recipient"))?),
            };
            let bits = parse_bits(get(4, "bits")?, lno)?;
            if tok.len() != 5 {
                return Err(parse_err(lno, "expected five fields"));
            }
            while t.phase_count() < p {
                t.open_phase();
            }
            t.send(from, to, bits);
        }
        t.validate()?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_phase_rule_breaks() {
        let mut t = PhaseTranscript::new();
        t.open_phase();
        t.send(Player::C, Recipient::Player(Player::D), vec![true]);
        t.open_phase();
        t.send(Player::A, Recipient::Player(Player::B), vec![]);
        assert!(t.validate().is_err(), "phase 1 never crossed to AB");

        let mut t = PhaseTranscript::new();
        t.open_phase();
        t.send(Player::A, Recipient::Player(Player::B), vec![true]);
        assert!(t.validate().is_err(), "AB cannot speak in phase 1");

        let mut t = PhaseTranscript::new();
        t.open_phase();
        t.send(Player::C, Recipient::Pair(Pair::AB), vec![true]);
        t.send(Player::D, Recipient::Player(Player::C), vec![true]);
        assert!(t.validate().is_err(), "a boundary message ends the phase");
    }

    #[test]
    fn text_round_trip_keeps_skipped_phase() {
        let mut t = PhaseTranscript::new();
        t.open_phase();
        t.open_phase();
        t.send(Player::A, Recipient::Player(Player::B), vec![true, false]);
        t.send(Player::B, Recipient::Pair(Pair::CD), vec![]);
        let text = t.to_text();
        assert_eq!(
            text,
            "phase=2 pair=AB from=PA to=PB bits=10\nphase=2 pair=AB from=PB to=CD bits=\n"
        );
        assert_eq!(PhaseTranscript::parse(&text).unwrap(), t);
        assert_eq!(t.total_bits(), 2);
    }
}
