// SPDX-License-Identifier: Apache-2.0

//! Deterministic benchmark circuit families.
//!
//! Two-qubit gate counts:
//!
//! | family                   | qubits    | two-qubit gates |
//! |--------------------------|-----------|-----------------|
//! | `qft(n)`                 | n         | n(n-1)          |
//! | `bv(n)` (all-ones)       | n+1       | n               |
//! | `qaoa_chain(n, L)`       | n         | (n-1)L          |
//! | `alt(n, L)`              | n         | (n-1)L          |
//! | `cuccaro_adder(b)`       | 2b+2      | 16b+1           |
//! | `heisenberg(n, S)`       | n         | 3(n-1)S         |
//!
//! Every controlled phase in `qft` is lowered to two `cx` plus phases, and
//! every Toffoli in the adder to the six-`cx` Clifford+T network.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Circuit;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Qft,
    Bv,
    QaoaChain,
    Alt,
    CuccaroAdder,
    Heisenberg,
}

impl Benchmark {
    pub const ALL: [Benchmark; 6] = [
        Benchmark::Qft,
        Benchmark::Bv,
        Benchmark::QaoaChain,
        Benchmark::Alt,
        Benchmark::CuccaroAdder,
        Benchmark::Heisenberg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Qft => "qft",
            Benchmark::Bv => "bv",
            Benchmark::QaoaChain => "qaoa_chain",
            Benchmark::Alt => "alt",
            Benchmark::CuccaroAdder => "cuccaro_adder",
            Benchmark::Heisenberg => "heisenberg",
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "qft" => Benchmark::Qft,
            "bv" => Benchmark::Bv,
            "qaoa_chain" | "qaoa" => Benchmark::QaoaChain,
            "alt" => Benchmark::Alt,
            "cuccaro_adder" | "adder" | "cuccaro" => Benchmark::CuccaroAdder,
            "heisenberg" => Benchmark::Heisenberg,
            _ => return Err(Error::UnknownBenchmark(s.to_string())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    /// Layer count for `qaoa_chain` and `alt`.
    pub layers: usize,
    /// Trotter steps for `heisenberg`.
    pub steps: usize,
    /// Bernstein-Vazirani secret, most significant bit first. `None` means all ones.
    pub secret: Option<Vec<bool>>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        // 20 layers gives 63*20 = 1260 gates at 64 qubits; 96 steps gives
        // 3*47*96 = 13536 at 48 qubits.
        GeneratorParams { layers: 20, steps: 96, secret: None }
    }
}

/// Generates a benchmark circuit. All families need `size >= 2`.
pub fn gen_benchmark(name: Benchmark, size: usize, params: &GeneratorParams) -> Result<Circuit> {
    if size < 2 {
        return Err(Error::BenchmarkTooSmall { name: name.to_string(), size, min: 2 });
    }
    let c = match name {
        Benchmark::Qft => qft(size),
        Benchmark::Bv => bv(size, params.secret.as_deref())?,
        Benchmark::QaoaChain => qaoa_chain(size, params.layers),
        Benchmark::Alt => alt(size, params.layers),
        Benchmark::CuccaroAdder => cuccaro_adder(size),
        Benchmark::Heisenberg => heisenberg(size, params.steps),
    };
    debug_assert!(c.validate().is_ok());
    Ok(c)
}

/// Parses `name:size[:key=value,...]`, e.g. `qaoa_chain:64:layers=20`.
pub fn parse_generator_spec(spec: &str) -> Result<Circuit> {
    let mut parts = spec.splitn(3, ':');
    let name: Benchmark = parts.next().unwrap_or_default().parse()?;
    let size_str = parts
        .next()
        .ok_or_else(|| Error::InvalidParameter(format!("generator spec `{spec}` is missing a size")))?;
    let size: usize = size_str
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad generator size `{size_str}`")))?;
    let mut params = GeneratorParams::default();
    if let Some(rest) = parts.next() {
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{kv}`")))?;
            let bad = || Error::InvalidParameter(format!("bad value for `{k}`: `{v}`"));
            match k {
                "layers" => params.layers = v.parse().map_err(|_| bad())?,
                "steps" => params.steps = v.parse().map_err(|_| bad())?,
                "secret" => {
                    let bits = v
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(bad()),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    params.secret = Some(bits);
                }
                _ => return Err(Error::InvalidParameter(format!("unknown generator parameter `{k}`"))),
            }
        }
    }
    gen_benchmark(name, size, &params)
}

fn controlled_phase(c: &mut Circuit, ctrl: usize, tgt: usize, theta: f64) {
    c.push_one("u1", ctrl, &[theta / 2.0]);
    c.push_two("cx", ctrl, tgt, &[]);
    c.push_one("u1", tgt, &[-theta / 2.0]);
    c.push_two("cx", ctrl, tgt, &[]);
    c.push_one("u1", tgt, &[theta / 2.0]);
}

fn qft(n: usize) -> Circuit {
    let mut c = Circuit::new(format!("qft_{n}"), n);
    for i in 0..n {
        c.push_one("h", i, &[]);
        for j in i + 1..n {
            let theta = PI / f64::powi(2.0, (j - i) as i32);
            controlled_phase(&mut c, j, i, theta);
        }
    }
    c
}

fn bv(n: usize, secret: Option<&[bool]>) -> Result<Circuit> {
    let bits: Vec<bool> = match secret {
        Some(s) if s.len() != n => {
            return Err(Error::InvalidParameter(format!("secret has {} bits, expected {n}", s.len())))
        }
        Some(s) => s.to_vec(),
        None => vec![true; n],
    };
    let anc = n;
    let mut c = Circuit::new(format!("bv_{n}"), n + 1);
    c.push_one("x", anc, &[]);
    for q in 0..=n {
        c.push_one("h", q, &[]);
    }
    for (q, &bit) in bits.iter().enumerate() {
        if bit {
            c.push_two("cx", q, anc, &[]);
        }
    }
    for q in 0..n {
        c.push_one("h", q, &[]);
    }
    Ok(c)
}

fn qaoa_chain(n: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(format!("qaoa_chain_{n}"), n);
    for q in 0..n {
        c.push_one("h", q, &[]);
    }
    for l in 0..layers {
        let gamma = 0.4 + 0.05 * l as f64;
        let beta = 0.8 - 0.03 * l as f64;
        for q in 0..n - 1 {
            c.push_two("rzz", q, q + 1, &[gamma]);
        }
        for q in 0..n {
            c.push_one("rx", q, &[2.0 * beta]);
        }
    }
    c
}

fn alt(n: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(format!("alt_{n}"), n);
    for l in 0..layers {
        for offset in [0, 1] {
            for q in 0..n {
                c.push_one("ry", q, &[0.1 * (l + 1) as f64 + 0.01 * q as f64]);
            }
            let mut q = offset;
            while q + 1 < n {
                c.push_two("cz", q, q + 1, &[]);
                q += 2;
            }
        }
    }
    c
}

fn toffoli(c: &mut Circuit, a: usize, b: usize, t: usize) {
    c.push_one("h", t, &[]);
    c.push_two("cx", b, t, &[]);
    c.push_one("tdg", t, &[]);
    c.push_two("cx", a, t, &[]);
    c.push_one("t", t, &[]);
    c.push_two("cx", b, t, &[]);
    c.push_one("tdg", t, &[]);
    c.push_two("cx", a, t, &[]);
    c.push_one("t", b, &[]);
    c.push_one("t", t, &[]);
    c.push_one("h", t, &[]);
    c.push_two("cx", a, b, &[]);
    c.push_one("t", a, &[]);
    c.push_one("tdg", b, &[]);
    c.push_two("cx", a, b, &[]);
}

fn cuccaro_adder(bits: usize) -> Circuit {
    // q0 = carry in, a_i = 1 + 2i, b_i = 2 + 2i, last = carry out.
    let n = 2 * bits + 2;
    let a = |i: usize| 1 + 2 * i;
    let b = |i: usize| 2 + 2 * i;
    let cout = n - 1;
    let mut c = Circuit::new(format!("cuccaro_adder_{bits}"), n);
    let maj = |c: &mut Circuit, x: usize, y: usize, z: usize| {
        c.push_two("cx", z, y, &[]);
        c.push_two("cx", z, x, &[]);
        toffoli(c, x, y, z);
    };
    let uma = |c: &mut Circuit, x: usize, y: usize, z: usize| {
        toffoli(c, x, y, z);
        c.push_two("cx", z, x, &[]);
        c.push_two("cx", x, y, &[]);
    };
    maj(&mut c, 0, b(0), a(0));
    for i in 1..bits {
        maj(&mut c, a(i - 1), b(i), a(i));
    }
    c.push_two("cx", a(bits - 1), cout, &[]);
    for i in (1..bits).rev() {
        uma(&mut c, a(i - 1), b(i), a(i));
    }
    uma(&mut c, 0, b(0), a(0));
    c
}

fn heisenberg(n: usize, steps: usize) -> Circuit {
    let mut c = Circuit::new(format!("heisenberg_{n}"), n);
    let dt = 0.1;
    for _ in 0..steps {
        for q in 0..n - 1 {
            c.push_two("rxx", q, q + 1, &[2.0 * dt]);
            c.push_two("ryy", q, q + 1, &[2.0 * dt]);
            c.push_two("rzz", q, q + 1, &[2.0 * dt]);
        }
        for q in 0..n {
            c.push_one("rz", q, &[0.5 * dt]);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::qasm::{emit_qasm, parse_qasm};

    fn gen(name: Benchmark, size: usize) -> Circuit {
        gen_benchmark(name, size, &GeneratorParams::default()).unwrap()
    }

    #[test]
    fn table_counts() {
        assert_eq!(gen(Benchmark::Qft, 24).two_qubit_count(), 552);
        assert_eq!(gen(Benchmark::Qft, 64).two_qubit_count(), 4032);
        let bv = gen(Benchmark::Bv, 64);
        assert_eq!((bv.n_qubits, bv.two_qubit_count()), (65, 64));
        assert_eq!(gen(Benchmark::QaoaChain, 64).two_qubit_count(), 1260);
        assert_eq!(gen(Benchmark::Alt, 64).two_qubit_count(), 1260);
        assert_eq!(gen(Benchmark::Heisenberg, 48).two_qubit_count(), 13536);
    }

    #[test]
    fn adder_shape() {
        let a = gen(Benchmark::CuccaroAdder, 32);
        assert_eq!(a.n_qubits, 66);
        assert_eq!(a.two_qubit_count(), 16 * 32 + 1);
    }

    #[test]
    fn bv_secret() {
        let p = GeneratorParams { secret: Some(vec![true, false, true]), ..Default::default() };
        assert_eq!(gen_benchmark(Benchmark::Bv, 3, &p).unwrap().two_qubit_count(), 2);
        let p = GeneratorParams { secret: Some(vec![true]), ..Default::default() };
        assert!(gen_benchmark(Benchmark::Bv, 3, &p).is_err());
    }

    #[test]
    fn size_floor_and_unknown() {
        assert!(matches!(
            gen_benchmark(Benchmark::Qft, 1, &GeneratorParams::default()),
            Err(Error::BenchmarkTooSmall { .. })
        ));
        assert!(matches!("grover".parse::<Benchmark>(), Err(Error::UnknownBenchmark(_))));
    }

    #[test]
    fn spec_syntax() {
        assert_eq!(parse_generator_spec("qaoa_chain:8:layers=3").unwrap().two_qubit_count(), 21);
        assert_eq!(parse_generator_spec("heisenberg:4:steps=2").unwrap().two_qubit_count(), 18);
        assert_eq!(parse_generator_spec("bv:4:secret=1001").unwrap().two_qubit_count(), 2);
        assert!(parse_generator_spec("qft").is_err());
        assert!(parse_generator_spec("qft:x").is_err());
        assert!(parse_generator_spec("qft:4:depth=2").is_err());
    }

    #[test]
    fn generators_round_trip_through_qasm() {
        for b in Benchmark::ALL {
            let c = gen(b, 4);
            let again = parse_qasm(&emit_qasm(&c)).unwrap();
            assert_eq!(c.gates, again.gates, "{b}");
        }
    }
}
