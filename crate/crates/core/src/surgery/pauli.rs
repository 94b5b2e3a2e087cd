use std::fmt;

/// A parity of measurement outcomes plus a constant: `constant XOR (mask . bits)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Parity {
    pub constant: bool,
    pub mask: u64,
}

impl Parity {
    pub fn bit(index: usize) -> Self {
        Parity {
            constant: false,
            mask: 1 << index,
        }
    }

    pub fn eval(self, bits: u64) -> bool {
        self.constant ^ ((self.mask & bits).count_ones() % 2 == 1)
    }

    pub fn xor(self, other: Parity) -> Parity {
        Parity {
            constant: self.constant ^ other.constant,
            mask: self.mask ^ other.mask,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = (0..64)
            .filter(|i| self.mask >> i & 1 == 1)
            .map(|i| format!("m{i}"))
            .collect();
        if self.constant {
            terms.insert(0, "1".into());
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Pauli operator `i^ipow (-1)^(signs . m) X^x Z^z` over up to 64 patches,
/// every X factor written left of every Z factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    pub ipow: u8,
    pub signs: u64,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString {
            x: 0,
            z: 0,
            ipow: 0,
            signs: 0,
        }
    }

    pub fn single(patch: usize, letter: char) -> Self {
        let mut p = Self::identity();
        p.set(patch, letter);
        p
    }

    /// Hermitian string from letters, patch `i` at position `i`; a leading
    /// `-` negates it.
    pub fn parse(s: &str) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut p = Self::identity();
        for (i, ch) in body.chars().enumerate() {
            if !"IXYZ".contains(ch) || i >= 64 {
                return None;
            }
            p.set(i, ch);
        }
        if neg {
            p.ipow = (p.ipow + 2) % 4;
        }
        Some(p)
    }

    /// Sets the letter on one patch, keeping the operator Hermitian when it was.
    pub fn set(&mut self, patch: usize, letter: char) {
        let bit = 1u64 << patch;
        let had_y = self.x & self.z & bit != 0;
        self.x &= !bit;
        self.z &= !bit;
        if had_y {
            self.ipow = (self.ipow + 3) % 4;
        }
        match letter {
            'X' => self.x |= bit,
            'Z' => self.z |= bit,
            'Y' => {
                self.x |= bit;
                self.z |= bit;
                self.ipow = (self.ipow + 1) % 4;
            }
            _ => {}
        }
    }

    pub fn letter(&self, patch: usize) -> char {
        match (self.x >> patch & 1, self.z >> patch & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Phase in front of the letter product, in quarter turns.
    pub fn hermitian_phase(&self) -> u8 {
        let ys = ((self.x & self.z).count_ones() % 4) as u8;
        (self.ipow + 4 - ys) % 4
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_phase().is_multiple_of(2)
    }

    /// Sign of a Hermitian string as a parity: `1` means `-`.
    pub fn sign(&self) -> Parity {
        Parity {
            constant: self.hermitian_phase() == 2,
            mask: self.signs,
        }
    }

    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            ipow: (self.ipow + other.ipow + 2 * (swaps % 2)) % 4,
            signs: self.signs ^ other.signs,
        }
    }

    pub fn negate(&mut self) {
        self.ipow = (self.ipow + 2) % 4;
    }

    /// Letters over `n` patches, with a leading sign when negative.
    pub fn letters(&self, n: usize) -> String {
        (0..n).map(|i| self.letter(i)).collect()
    }

    pub fn to_string_n(&self, n: usize) -> String {
        let sign = self.sign();
        let prefix = match (sign.constant, sign.mask) {
            (false, 0) => String::new(),
            (true, 0) => "-".into(),
            _ => format!("(-1)^({sign}) "),
        };
        format!("{prefix}{}", self.letters(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn products_follow_pauli_algebra() {
        // XZ = -iY
        let xz = p("X").mul(&p("Z"));
        assert_eq!(xz.letter(0), 'Y');
        assert_eq!(xz.hermitian_phase(), 3);
        // ZX = iY
        assert_eq!(p("Z").mul(&p("X")).hermitian_phase(), 1);
        // YY = I
        let yy = p("Y").mul(&p("Y"));
        assert_eq!((yy.x, yy.z, yy.hermitian_phase()), (0, 0, 0));
        // (XX)(ZZ) = (XZ)(XZ) = -YY
        let r = p("XX").mul(&p("ZZ"));
        assert_eq!(r.letters(2), "YY");
        assert_eq!(r.hermitian_phase(), 2);
    }

    #[test]
    fn commutation() {
        assert!(p("XX").commutes(&p("ZZ")));
        assert!(!p("XI").commutes(&p("ZZ")));
        assert!(!p("Y").commutes(&p("X")));
        assert!(p("IZ").commutes(&p("XI")));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("-IYZ").to_string_n(3), "-IYZ");
        assert_eq!(p("XZ").to_string_n(2), "XZ");
        assert!(PauliString::parse("XQ").is_none());
        let mut s = p("ZZ");
        s.signs = 0b101;
        assert_eq!(s.to_string_n(2), "(-1)^(m0+m2) ZZ");
    }

    #[test]
    fn set_replaces_letters() {
        let mut s = p("Y");
        s.set(0, 'X');
        assert_eq!(s, p("X"));
        s.set(0, 'Y');
        assert_eq!(s, p("Y"));
    }
}
