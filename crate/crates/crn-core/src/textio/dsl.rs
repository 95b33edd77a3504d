//! Parser and serializer for the reaction DSL and configuration syntax.
//!
//! Grammar, one reaction per line:
//!   side ::= `0` | term (`+` term)*
//!   term ::= [coefficient] species
//! with arrow `->` for one reaction and `<->` expanding to forward then
//! reverse. `#` starts a comment; blank lines are ignored. A comment of the
//! form `# species: A B C` pins the canonical species order (and may declare
//! species that no reaction mentions); the serializer emits it only when the
//! first-mention order of the emitted text would not reproduce Λ.

use num::{BigUint, One, Zero};
use thiserror::Error;

use crate::model::{
    is_valid_species_name, Configuration, Network, Reaction, Species, ValidationError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown species {name} at line {line}")]
    UnknownSpecies { line: usize, name: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> TextError {
    TextError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigUint),
    Ident(String),
    Plus,
    Arrow { reversible: bool },
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<(Token, usize)>, TextError> {
    let mut tokens = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let col = i + 1;
        let c = bytes[i] as char;
        if c == ' ' || c == '\t' || c == '\r' {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '+' {
            tokens.push((Token::Plus, col));
            i += 1;
        } else if line[i..].starts_with("<->") {
            tokens.push((Token::Arrow { reversible: true }, col));
            i += 3;
        } else if line[i..].starts_with("->") {
            tokens.push((Token::Arrow { reversible: false }, col));
            i += 2;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: BigUint = line[start..i].parse().expect("digits");
            tokens.push((Token::Number(n), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && {
                let ch = bytes[i] as char;
                ch.is_ascii_alphanumeric() || ch == '_'
            } {
                i += 1;
            }
            tokens.push((Token::Ident(line[start..i].to_string()), col));
        } else {
            return Err(syntax(line_no, col, format!("unexpected character {c:?}")));
        }
    }
    Ok(tokens)
}

struct Interner {
    species: Vec<Species>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> Species {
        if let Some(s) = self.species.iter().find(|s| s.name() == name) {
            return s.clone();
        }
        let s = Species::new(name).expect("lexer only produces valid identifiers");
        self.species.push(s.clone());
        s
    }
}

/// Parses one side of a reaction from a token stream.
fn parse_side(
    line_no: usize,
    tokens: &[(Token, usize)],
    interner: &mut Interner,
) -> Result<Configuration, TextError> {
    // The single token `0` denotes the empty side.
    if let [(Token::Number(n), _)] = tokens {
        if n.is_zero() {
            return Ok(Configuration::zero());
        }
    }
    if tokens.is_empty() {
        return Err(syntax(line_no, 1, "empty reaction side (use 0)"));
    }
    let mut config = Configuration::zero();
    let mut expect_term = true;
    let mut i = 0;
    while i < tokens.len() {
        if !expect_term {
            match &tokens[i] {
                (Token::Plus, _) => {
                    i += 1;
                    expect_term = true;
                    continue;
                }
                (_, col) => return Err(syntax(line_no, *col, "expected `+`")),
            }
        }
        let coefficient = match &tokens[i] {
            (Token::Number(n), col) => {
                if n.is_zero() {
                    return Err(syntax(line_no, *col, "zero coefficient"));
                }
                i += 1;
                n.clone()
            }
            _ => BigUint::one(),
        };
        match &tokens[i..] {
            [(Token::Ident(name), _), ..] => {
                let s = interner.intern(name);
                config.add(&s, &coefficient);
                i += 1;
                expect_term = false;
            }
            [(_, col), ..] => return Err(syntax(line_no, *col, "expected species name")),
            [] => {
                let col = tokens.last().map(|(_, c)| *c).unwrap_or(1);
                return Err(syntax(line_no, col, "dangling coefficient"));
            }
        }
    }
    if expect_term {
        let col = tokens.last().map(|(_, c)| *c).unwrap_or(1);
        return Err(syntax(line_no, col, "trailing `+`"));
    }
    Ok(config)
}

/// Parses the reaction DSL into a validated network. Species order is
/// first-mention order, unless a `# species:` directive pins it.
pub fn parse_network(text: &str) -> Result<Network, TextError> {
    let mut interner = Interner {
        species: Vec::new(),
    };
    let mut reactions: Vec<Reaction> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw_line.trim();
        if let Some(rest) = trimmed.strip_prefix("# species:") {
            for name in rest.split_whitespace() {
                if !is_valid_species_name(name) {
                    return Err(syntax(line_no, 1, format!("invalid species name {name:?}")));
                }
                interner.intern(name);
            }
            continue;
        }
        let tokens = tokenize(line_no, raw_line)?;
        if tokens.is_empty() {
            continue;
        }
        let arrow_pos = tokens
            .iter()
            .position(|(t, _)| matches!(t, Token::Arrow { .. }));
        let arrow_pos = match arrow_pos {
            Some(p) => p,
            None => {
                return Err(syntax(line_no, tokens[0].1, "missing `->`"));
            }
        };
        if tokens[arrow_pos + 1..]
            .iter()
            .any(|(t, _)| matches!(t, Token::Arrow { .. }))
        {
            let (_, col) = tokens[arrow_pos + 1..]
                .iter()
                .find(|(t, _)| matches!(t, Token::Arrow { .. }))
                .unwrap();
            return Err(syntax(line_no, *col, "more than one arrow"));
        }
        let reversible = matches!(tokens[arrow_pos].0, Token::Arrow { reversible: true });
        let lhs = parse_side(line_no, &tokens[..arrow_pos], &mut interner)?;
        let rhs = parse_side(line_no, &tokens[arrow_pos + 1..], &mut interner)?;
        reactions.push(Reaction::new(lhs.clone(), rhs.clone()));
        if reversible {
            reactions.push(Reaction::new(rhs, lhs));
        }
    }
    Ok(Network::new(interner.species, reactions)?)
}

fn format_side(network: &Network, c: &Configuration) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for s in network.species() {
        let n = c.get(s);
        if n.is_zero() {
            continue;
        }
        if n.is_one() {
            parts.push(s.name().to_string());
        } else {
            parts.push(format!("{}{}", n, s.name()));
        }
    }
    parts.join(" + ")
}

/// Canonical round-trippable DSL text for a network.
pub fn serialize_network(network: &Network) -> String {
    let mut out = String::new();
    // Decide whether first-mention order of the emitted reactions (each
    // side listed in Λ order, reactants before products) would reproduce Λ;
    // if not, pin the order with a directive.
    let mut mention: Vec<&Species> = Vec::new();
    for rxn in network.reactions() {
        for side in [&rxn.reactants, &rxn.products] {
            for s in network.species() {
                if !side.get(s).is_zero() && !mention.contains(&s) {
                    mention.push(s);
                }
            }
        }
    }
    let natural: Vec<&Species> = network.species().iter().collect();
    if mention != natural {
        out.push_str("# species:");
        for s in network.species() {
            out.push(' ');
            out.push_str(s.name());
        }
        out.push('\n');
    }
    for rxn in network.reactions() {
        out.push_str(&format_side(network, &rxn.reactants));
        out.push_str(" -> ");
        out.push_str(&format_side(network, &rxn.products));
        out.push('\n');
    }
    out
}

/// Canonical multiset text for a configuration: `{2S2, 1S3}` in Λ order,
/// `{}` for the zero vector.
pub fn format_configuration(network: &Network, c: &Configuration) -> String {
    let mut parts = Vec::new();
    for s in network.species() {
        let n = c.get(s);
        if !n.is_zero() {
            parts.push(format!("{}{}", n, s.name()));
        }
    }
    format!("{{{}}}", parts.join(", "))
}

/// Parses a configuration in either `{2S2, 1S3}` multiset syntax or
/// `S2:2 S3:1` pair syntax. Species must belong to the network.
pub fn parse_configuration(text: &str, network: &Network) -> Result<Configuration, TextError> {
    let trimmed = text.trim();
    let mut config = Configuration::zero();
    let mut add = |name: &str, count: BigUint| -> Result<(), TextError> {
        match network.species_by_name(name) {
            Some(s) => {
                config.add(s, &count);
                Ok(())
            }
            None => Err(TextError::UnknownSpecies {
                line: 1,
                name: name.to_string(),
            }),
        }
    };
    if let Some(inner) = trimmed.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| syntax(1, trimmed.len(), "missing closing brace"))?;
        for entry in inner.split(',') {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let digits_end = entry
                .char_indices()
                .find(|(_, c)| !c.is_ascii_digit())
                .map(|(i, _)| i)
                .unwrap_or(entry.len());
            let (digits, rest) = entry.split_at(digits_end);
            let count: BigUint = if digits.is_empty() {
                BigUint::one()
            } else {
                digits.parse().expect("digits")
            };
            let name = rest.trim();
            if !is_valid_species_name(name) {
                return Err(syntax(1, 1, format!("invalid multiset entry {entry:?}")));
            }
            add(name, count)?;
        }
        Ok(config)
    } else {
        for pair in trimmed.split_whitespace() {
            let (name, count) = pair
                .split_once(':')
                .ok_or_else(|| syntax(1, 1, format!("expected name:count, got {pair:?}")))?;
            if !is_valid_species_name(name) {
                return Err(syntax(1, 1, format!("invalid species name {name:?}")));
            }
            let count: BigUint = count
                .parse()
                .map_err(|_| syntax(1, 1, format!("invalid count {count:?}")))?;
            add(name, count)?;
        }
        Ok(config)
    }
}
