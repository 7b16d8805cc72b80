// SPDX-License-Identifier: Apache-2.0

//! A small OpenQASM 2.0 reader and writer.
//!
//! Only one quantum register is allowed. `creg`, `barrier` and `measure` are
//! accepted and dropped. `swap` is expanded into three `cx` gates.

use std::fmt::Write as _;

use super::Circuit;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Arrow,
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let src = match raw.find("//") {
            Some(p) => &raw[..p],
            None => raw,
        };
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line });
            } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                    line,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push(Token { tok: Tok::Num(value), line });
            } else if c == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(Error::Syntax { line, message: "unterminated string".into() });
                }
                out.push(Token { tok: Tok::Str(chars[start..i].iter().collect()), line });
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line });
                i += 2;
            } else if ";,[](){}+-*/^".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line });
                i += 1;
            } else {
                return Err(Error::Syntax { line, message: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(out)
}

/// Operand of a gate application: one qubit or the whole register.
#[derive(Clone, Copy, Debug)]
enum Operand {
    Qubit(usize),
    Register,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qreg: Option<(String, usize)>,
}

enum GateSpec {
    One { params: &'static [usize] },
    Two { params: &'static [usize] },
    Swap,
}

fn lookup_gate(name: &str) -> Option<GateSpec> {
    use GateSpec::*;
    Some(match name {
        "h" | "x" | "y" | "z" | "s" | "sdg" | "t" | "tdg" | "id" | "sx" => One { params: &[0] },
        "rx" | "ry" | "rz" | "u1" | "p" => One { params: &[1] },
        "u2" => One { params: &[2] },
        "u3" | "u" => One { params: &[3] },
        "cx" | "CX" | "cz" => Two { params: &[0] },
        "cp" | "cu1" | "rzz" | "rxx" | "ryy" => Two { params: &[1] },
        "ms" => Two { params: &[0, 1] },
        "swap" => Swap,
        _ => return None,
    })
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: self.line(), message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                self.err("expected identifier")
            }
        }
    }

    fn expect_index(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            _ => {
                self.pos -= 1;
                self.err("expected non-negative integer")
            }
        }
    }

    fn skip_to_semicolon(&mut self) -> Result<()> {
        while let Some(t) = self.next() {
            if t == Tok::Sym(';') {
                return Ok(());
            }
        }
        self.err("missing `;`")
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.power()?;
        loop {
            if self.eat_sym('*') {
                v *= self.power()?;
            } else if self.eat_sym('/') {
                v /= self.power()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn power(&mut self) -> Result<f64> {
        let base = self.unary()?;
        if self.eat_sym('^') {
            let exp = self.power()?;
            Ok(base.powf(exp))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.eat_sym('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<f64> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(v),
            Some(Tok::Sym('(')) => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                if name == "pi" {
                    return Ok(std::f64::consts::PI);
                }
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => {
                        self.pos -= 1;
                        return self.err(format!("unknown identifier `{name}` in expression"));
                    }
                };
                self.expect_sym('(')?;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected expression")
            }
        }
    }

    fn operand(&mut self) -> Result<Operand> {
        let line = self.line();
        let name = self.expect_ident()?;
        let Some((reg, size)) = self.qreg.clone() else {
            return self.err("gate applied before `qreg` declaration");
        };
        if name != reg {
            return self.err(format!("unknown quantum register `{name}`"));
        }
        if self.eat_sym('[') {
            let index = self.expect_index()?;
            self.expect_sym(']')?;
            if index >= size {
                return Err(Error::QubitOutOfRange { line, index, size });
            }
            Ok(Operand::Qubit(index))
        } else {
            Ok(Operand::Register)
        }
    }

    fn operands(&mut self) -> Result<Vec<Operand>> {
        let mut ops = vec![self.operand()?];
        while self.eat_sym(',') {
            ops.push(self.operand()?);
        }
        self.expect_sym(';')?;
        Ok(ops)
    }

    fn params(&mut self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        if self.eat_sym('(') {
            if !self.eat_sym(')') {
                out.push(self.expr()?);
                while self.eat_sym(',') {
                    out.push(self.expr()?);
                }
                self.expect_sym(')')?;
            }
        }
        Ok(out)
    }

    fn gate(&mut self, name: String, circuit: &mut Circuit) -> Result<()> {
        let line = self.line();
        let Some(spec) = lookup_gate(&name) else {
            return Err(Error::UnsupportedGate { line, name });
        };
        let params = self.params()?;
        let ops = self.operands()?;
        let size = self.qreg.as_ref().map_or(0, |r| r.1);
        let check_params = |allowed: &[usize]| -> Result<()> {
            if allowed.contains(&params.len()) {
                Ok(())
            } else {
                Err(Error::Syntax {
                    line,
                    message: format!("`{name}` takes {allowed:?} parameters, got {}", params.len()),
                })
            }
        };
        match spec {
            GateSpec::One { params: allowed } => {
                check_params(allowed)?;
                match ops.as_slice() {
                    [Operand::Qubit(q)] => circuit.push_one(&name, *q, &params),
                    [Operand::Register] => {
                        for q in 0..size {
                            circuit.push_one(&name, q, &params);
                        }
                    }
                    _ => return Err(Error::Syntax { line, message: format!("`{name}` takes one operand") }),
                }
            }
            GateSpec::Two { params: allowed } => {
                check_params(allowed)?;
                let (a, b) = two_operands(&ops, &name, line)?;
                circuit.push_two(&name, a, b, &params);
            }
            GateSpec::Swap => {
                check_params(&[0])?;
                let (a, b) = two_operands(&ops, &name, line)?;
                circuit.push_two("cx", a, b, &[]);
                circuit.push_two("cx", b, a, &[]);
                circuit.push_two("cx", a, b, &[]);
            }
        }
        Ok(())
    }
}

fn two_operands(ops: &[Operand], name: &str, line: usize) -> Result<(usize, usize)> {
    match ops {
        [Operand::Qubit(a), Operand::Qubit(b)] if a != b => Ok((*a, *b)),
        [Operand::Qubit(_), Operand::Qubit(_)] => Err(Error::Syntax {
            line,
            message: format!("`{name}` operands must be distinct"),
        }),
        _ => Err(Error::Syntax { line, message: format!("`{name}` takes two indexed qubit operands") }),
    }
}

/// Parses an OpenQASM 2.0 program into a [`Circuit`] with gates in file order.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut p = Parser { toks: lex(text)?, pos: 0, qreg: None };
    let mut circuit = Circuit::new("qasm", 0);
    while let Some(tok) = p.next() {
        let Tok::Ident(word) = tok else {
            p.pos -= 1;
            return p.err("expected statement");
        };
        match word.as_str() {
            "OPENQASM" => {
                match p.next() {
                    Some(Tok::Num(_)) => {}
                    _ => return p.err("expected version number"),
                }
                p.expect_sym(';')?;
            }
            "include" => {
                match p.next() {
                    Some(Tok::Str(_)) => {}
                    _ => return p.err("expected file name string"),
                }
                p.expect_sym(';')?;
            }
            "qreg" => {
                let name = p.expect_ident()?;
                p.expect_sym('[')?;
                let size = p.expect_index()?;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                if p.qreg.is_some() {
                    return p.err("only a single quantum register is supported");
                }
                p.qreg = Some((name, size));
                circuit.n_qubits = size;
            }
            "creg" | "barrier" | "measure" => p.skip_to_semicolon()?,
            "gate" | "opaque" | "if" | "reset" => {
                p.pos -= 1;
                return p.err(format!("`{word}` statements are not supported"));
            }
            _ => p.gate(word, &mut circuit)?,
        }
    }
    Ok(circuit)
}

/// Writes a circuit back out as OpenQASM 2.0. Parameters use Rust's shortest
/// round-trip float formatting, so [`parse_qasm`] recovers them exactly.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.n_qubits);
    for g in &circuit.gates {
        out.push_str(g.kind.label());
        if !g.params.is_empty() {
            let ps: Vec<String> = g.params.iter().map(|p| format!("{p}")).collect();
            let _ = write!(out, "({})", ps.join(","));
        }
        let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", qs.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn single_cx() {
        let c = parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
        assert_eq!(c.n_qubits, 2);
        assert_eq!(c.gates.len(), 1);
        assert_eq!(c.gates[0].kind, GateKind::TwoQubit("cx".into()));
    }

    #[test]
    fn single_h() {
        let c = parse_qasm("qreg q[1]; h q[0];").unwrap();
        assert_eq!(c.gates.len(), 1);
        assert_eq!(c.gates[0].kind, GateKind::OneQubit("h".into()));
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_qasm("qreg q[4];\ncx q[0],q[5];").unwrap_err();
        match err {
            Error::QubitOutOfRange { line, index, size } => assert_eq!((line, index, size), (2, 5, 4)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn header_measure_barrier_creg_dropped() {
        let src = r#"OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[3];
h q[0];
barrier q;
cx q[0],q[2]; // trailing comment
measure q -> c;
measure q[1] -> c[1];
"#;
        let c = parse_qasm(src).unwrap();
        assert_eq!(c.n_qubits, 3);
        assert_eq!(c.gates.len(), 2);
    }

    #[test]
    fn swap_expands_to_three_cx() {
        let c = parse_qasm("qreg q[2]; swap q[0],q[1];").unwrap();
        assert_eq!(c.two_qubit_count(), 3);
        assert_eq!(c.gates[1].qubits, vec![1, 0]);
    }

    #[test]
    fn parameter_expressions() {
        let c = parse_qasm("qreg q[2]; rz(-pi/2) q[0]; cp(2*pi/2^3) q[0],q[1]; u3(0.5e1,1,-.25) q[1];").unwrap();
        assert!((c.gates[0].params[0] + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((c.gates[1].params[0] - std::f64::consts::PI / 4.0).abs() < 1e-15);
        assert_eq!(c.gates[2].params, vec![5.0, 1.0, -0.25]);
    }

    #[test]
    fn register_broadcast_for_one_qubit_gates() {
        let c = parse_qasm("qreg q[3]; h q;").unwrap();
        assert_eq!(c.gates.len(), 3);
    }

    #[test]
    fn unsupported_gate_reports_line() {
        let err = parse_qasm("qreg q[3];\n\nccx q[0],q[1],q[2];").unwrap_err();
        assert!(matches!(err, Error::UnsupportedGate { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = parse_qasm("qreg q[2];\nh q[0]\ncx q[0],q[1];").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
        assert!(matches!(parse_qasm("qreg q[2]; cx q[0],q[0];"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_qasm("qreg q[2]; qreg r[2];"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_qasm("qreg q[2]; h r[0];"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_qasm("qreg q[2]; rz q[0];"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn emit_then_parse_is_identity() {
        let src = "qreg q[3]; h q[0]; rz(0.1) q[1]; cp(-1.25e-7) q[2],q[0]; rzz(3) q[1],q[2];";
        let c = parse_qasm(src).unwrap();
        let again = parse_qasm(&emit_qasm(&c)).unwrap();
        assert_eq!(c.gates, again.gates);
        assert_eq!(c.n_qubits, again.n_qubits);
    }
}
