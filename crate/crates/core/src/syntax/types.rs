use std::fmt;

/// Dynamic-lifting modality. `One` marks computations that never lift and
/// can therefore run at circuit generation time; `Zero` marks computations
/// that may lift and must run at circuit execution time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Zero,
    One,
}

impl Modality {
    /// Boolean conjunction: `One` is the identity, `Zero` absorbs.
    pub fn and(self, other: Modality) -> Modality {
        match (self, other) {
            (Modality::One, Modality::One) => Modality::One,
            _ => Modality::Zero,
        }
    }

    pub fn as_digit(self) -> u8 {
        match self {
            Modality::Zero => 0,
            Modality::One => 1,
        }
    }
}

pub fn modality_and(a: Modality, b: Modality) -> Modality {
    a.and(b)
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_digit())
    }
}

pub type HoleId = u32;

/// A modality position inside a type: either fixed, or a hole left by the
/// surface syntax for the checker to solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Known(Modality),
    Hole(HoleId),
}

impl Mode {
    pub const ZERO: Mode = Mode::Known(Modality::Zero);
    pub const ONE: Mode = Mode::Known(Modality::One);

    pub fn known(self) -> Option<Modality> {
        match self {
            Mode::Known(m) => Some(m),
            Mode::Hole(_) => None,
        }
    }
}

impl From<Modality> for Mode {
    fn from(m: Modality) -> Self {
        Mode::Known(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WireType {
    Qubit,
    Bit,
}

impl WireType {
    pub fn as_type(self) -> Type {
        match self {
            WireType::Qubit => Type::Qubit,
            WireType::Bit => Type::Bit,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WireType::Qubit => "Qubit",
            WireType::Bit => "Bit",
        }
    }
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Unit,
    Qubit,
    Bit,
    Bool,
    Nat,
    Bang(Mode, Box<Type>),
    Arrow(Box<Type>, Mode, Box<Type>),
    Circ(Box<Type>, Box<Type>),
    Tensor(Box<Type>, Box<Type>),
    Maybe(Box<Type>),
    /// Checker-internal unification variable; never produced by the parser.
    Meta(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeClass {
    Parameter,
    Simple,
    /// Unit and tensors of Unit satisfy both predicates.
    ParameterAndSimple,
    General,
}

impl Type {
    pub fn bang(m: impl Into<Mode>, a: Type) -> Type {
        Type::Bang(m.into(), Box::new(a))
    }

    pub fn arrow(a: Type, m: impl Into<Mode>, b: Type) -> Type {
        Type::Arrow(Box::new(a), m.into(), Box::new(b))
    }

    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn circ(s: Type, u: Type) -> Type {
        Type::Circ(Box::new(s), Box::new(u))
    }

    pub fn maybe(a: Type) -> Type {
        Type::Maybe(Box::new(a))
    }

    /// Built from Unit, Qubit, Bit and tensors only.
    pub fn is_simple(&self) -> bool {
        match self {
            Type::Unit | Type::Qubit | Type::Bit => true,
            Type::Tensor(a, b) => a.is_simple() && b.is_simple(),
            _ => false,
        }
    }

    /// Duplicable and discardable types.
    pub fn is_parameter(&self) -> bool {
        match self {
            Type::Unit | Type::Nat | Type::Bool | Type::Bang(..) | Type::Circ(..) => true,
            Type::Tensor(a, b) => a.is_parameter() && b.is_parameter(),
            Type::Maybe(a) => a.is_parameter(),
            _ => false,
        }
    }

    pub fn classify(&self) -> TypeClass {
        match (self.is_parameter(), self.is_simple()) {
            (true, true) => TypeClass::ParameterAndSimple,
            (true, false) => TypeClass::Parameter,
            (false, true) => TypeClass::Simple,
            (false, false) => TypeClass::General,
        }
    }

    pub fn has_holes(&self) -> bool {
        let mut found = false;
        self.visit_modes(&mut |m| found |= matches!(m, Mode::Hole(_)));
        found
    }

    pub fn visit_modes(&self, f: &mut impl FnMut(Mode)) {
        match self {
            Type::Bang(m, a) => {
                f(*m);
                a.visit_modes(f);
            }
            Type::Arrow(a, m, b) => {
                a.visit_modes(f);
                f(*m);
                b.visit_modes(f);
            }
            Type::Circ(a, b) | Type::Tensor(a, b) => {
                a.visit_modes(f);
                b.visit_modes(f);
            }
            Type::Maybe(a) => a.visit_modes(f),
            Type::Unit | Type::Qubit | Type::Bit | Type::Bool | Type::Nat | Type::Meta(_) => {}
        }
    }

    pub fn map_modes(&self, f: &mut impl FnMut(Mode) -> Mode) -> Type {
        match self {
            Type::Bang(m, a) => Type::Bang(f(*m), Box::new(a.map_modes(f))),
            Type::Arrow(a, m, b) => {
                let a = a.map_modes(f);
                let m = f(*m);
                Type::Arrow(Box::new(a), m, Box::new(b.map_modes(f)))
            }
            Type::Circ(a, b) => Type::circ(a.map_modes(f), b.map_modes(f)),
            Type::Tensor(a, b) => Type::tensor(a.map_modes(f), b.map_modes(f)),
            Type::Maybe(a) => Type::maybe(a.map_modes(f)),
            t => t.clone(),
        }
    }

    /// Structural equality that treats every hole as equal to every other hole.
    pub fn alpha_eq(&self, other: &Type) -> bool {
        use Type::*;
        let mode_eq = |a: &Mode, b: &Mode| match (a, b) {
            (Mode::Hole(_), Mode::Hole(_)) => true,
            _ => a == b,
        };
        match (self, other) {
            (Unit, Unit) | (Qubit, Qubit) | (Bit, Bit) | (Bool, Bool) | (Nat, Nat) => true,
            (Bang(m, a), Bang(n, b)) => mode_eq(m, n) && a.alpha_eq(b),
            (Arrow(a, m, b), Arrow(c, n, d)) => mode_eq(m, n) && a.alpha_eq(c) && b.alpha_eq(d),
            (Circ(a, b), Circ(c, d)) | (Tensor(a, b), Tensor(c, d)) => a.alpha_eq(c) && b.alpha_eq(d),
            (Maybe(a), Maybe(b)) => a.alpha_eq(b),
            (Meta(a), Meta(b)) => a == b,
            _ => false,
        }
    }
}

// Precedence: 0 = arrow, 1 = tensor, 2 = prefix (`!`, `Maybe`), 3 = atom.
fn type_prec(t: &Type) -> u8 {
    match t {
        Type::Arrow(..) => 0,
        Type::Tensor(..) => 1,
        Type::Bang(..) | Type::Maybe(..) => 2,
        _ => 3,
    }
}

fn write_type(f: &mut fmt::Formatter<'_>, t: &Type, min: u8) -> fmt::Result {
    if type_prec(t) < min {
        f.write_str("(")?;
        write_type(f, t, 0)?;
        return f.write_str(")");
    }
    match t {
        Type::Unit => f.write_str("Unit"),
        Type::Qubit => f.write_str("Qubit"),
        Type::Bit => f.write_str("Bit"),
        Type::Bool => f.write_str("Bool"),
        Type::Nat => f.write_str("Nat"),
        Type::Meta(n) => write!(f, "?{n}"),
        Type::Bang(m, a) => {
            match m {
                Mode::Known(m) => write!(f, "!_{m}")?,
                Mode::Hole(_) => f.write_str("!")?,
            }
            if type_prec(a) < 3 {
                write_type(f, a, 3)
            } else {
                f.write_str(" ")?;
                write_type(f, a, 3)
            }
        }
        Type::Maybe(a) => {
            f.write_str("Maybe ")?;
            write_type(f, a, 3)
        }
        Type::Arrow(a, m, b) => {
            write_type(f, a, 1)?;
            match m {
                Mode::Known(m) => write!(f, " -o_{m} ")?,
                Mode::Hole(_) => f.write_str(" -> ")?,
            }
            write_type(f, b, 0)
        }
        Type::Tensor(a, b) => {
            write_type(f, a, 2)?;
            f.write_str(" * ")?;
            write_type(f, b, 1)
        }
        Type::Circ(a, b) => {
            f.write_str("Circ(")?;
            write_type(f, a, 0)?;
            f.write_str(", ")?;
            write_type(f, b, 0)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, 0)
    }
}
