//! Labeled orthonormal bases.
//!
//! Every Hilbert-space factor is named: a slit path, a diffracted ray, a
//! screen position, a detector click register, or a detector-internal mode.
//! Compatibility between states and maps is decided by label equality, never
//! by dimension alone, so a silently permuted basis is an error, not a wrong
//! answer.

use std::fmt;

/// The subsystem a label component belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Subsystem {
    Path,
    DiffractedRay,
    Position,
    Click,
    Internal,
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subsystem::Path => "Path",
            Subsystem::DiffractedRay => "DiffractedRay",
            Subsystem::Position => "Position",
            Subsystem::Click => "Click",
            Subsystem::Internal => "Internal",
        };
        f.write_str(s)
    }
}

/// Slit identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Slit {
    A,
    B,
}

impl Slit {
    pub const BOTH: [Slit; 2] = [Slit::A, Slit::B];
}

impl fmt::Display for Slit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slit::A => "a",
            Slit::B => "b",
        })
    }
}

/// Detector-internal mode of one element (one qubit per element).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Mode {
    A,
    B,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::A => "A",
            Mode::B => "B",
        })
    }
}

/// Click register: idle, or a click at element `j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ClickTag {
    Idle,
    Fired(usize),
}

/// One subsystem component of a basis label.
///
/// Ordering is the declaration order of subsystems, then the structured tag;
/// this is the total, stable order every basis is kept in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Component {
    /// Slit path state, before diffraction.
    Path(Slit),
    /// Ray from slit `slit` toward detector element `element`.
    Ray { slit: Slit, element: usize },
    /// Particle localized at detector element `element`.
    Position { element: usize },
    /// Click register state.
    Click(ClickTag),
    /// Internal mode `mode` of detector element `element`.
    Internal { mode: Mode, element: usize },
}

impl Component {
    pub fn subsystem(&self) -> Subsystem {
        match self {
            Component::Path(_) => Subsystem::Path,
            Component::Ray { .. } => Subsystem::DiffractedRay,
            Component::Position { .. } => Subsystem::Position,
            Component::Click(_) => Subsystem::Click,
            Component::Internal { .. } => Subsystem::Internal,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Path(s) => write!(f, "Path:{s}"),
            Component::Ray { slit, element } => write!(f, "Ray:({slit},x{element})"),
            Component::Position { element } => write!(f, "Position:x{element}"),
            Component::Click(ClickTag::Idle) => write!(f, "Click:idle"),
            Component::Click(ClickTag::Fired(j)) => write!(f, "Click:fired(x{j})"),
            Component::Internal { mode, element } => write!(f, "Internal:({mode},x{element})"),
        }
    }
}

/// A basis label: one component per participating subsystem, kept sorted by
/// subsystem so that equal labels compare equal regardless of construction
/// order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisLabel {
    components: Vec<Component>,
}

impl BasisLabel {
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort();
        debug_assert!(
            components
                .windows(2)
                .all(|w| w[0].subsystem() != w[1].subsystem()),
            "duplicate subsystem in label"
        );
        Self { components }
    }

    pub fn single(c: Component) -> Self {
        Self {
            components: vec![c],
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn subsystems(&self) -> impl Iterator<Item = Subsystem> + '_ {
        self.components.iter().map(Component::subsystem)
    }

    pub fn component_for(&self, s: Subsystem) -> Option<Component> {
        self.components.iter().copied().find(|c| c.subsystem() == s)
    }

    /// Concatenate the components of two labels over disjoint subsystems.
    pub fn merge(&self, other: &BasisLabel) -> crate::Result<BasisLabel> {
        for c in &self.components {
            if let Some(d) = other.component_for(c.subsystem()) {
                let _ = d;
                return Err(crate::SimError::SubsystemOverlap(c.subsystem()));
            }
        }
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Ok(BasisLabel::new(components))
    }

    /// Keep only components whose subsystem is in `keep`.
    pub fn project(&self, keep: &[Subsystem]) -> BasisLabel {
        BasisLabel::new(
            self.components
                .iter()
                .copied()
                .filter(|c| keep.contains(&c.subsystem()))
                .collect(),
        )
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.len() == 1 {
            return write!(f, "{}", self.components[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Component> for BasisLabel {
    fn from(c: Component) -> Self {
        BasisLabel::single(c)
    }
}

/// An ordered orthonormal basis: unique labels in ascending structured order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Basis {
    labels: Vec<BasisLabel>,
}

impl Basis {
    /// Sorts and rejects duplicates.
    pub fn new(mut labels: Vec<BasisLabel>) -> Self {
        labels.sort();
        assert!(
            labels.windows(2).all(|w| w[0] != w[1]),
            "duplicate basis label"
        );
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    /// The set of subsystems all labels share. Labels of one basis must agree.
    pub fn subsystems(&self) -> Vec<Subsystem> {
        match self.labels.first() {
            Some(l) => l.subsystems().collect(),
            None => Vec::new(),
        }
    }

    /// Ordered product basis over disjoint subsystem sets.
    pub fn tensor(&self, other: &Basis) -> crate::Result<Basis> {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(a.merge(b)?);
            }
        }
        Ok(Basis::new(labels))
    }

    // Single-subsystem building blocks of the model chain.

    /// {|a>, |b>}.
    pub fn path() -> Basis {
        Basis::new(Slit::BOTH.map(|s| Component::Path(s).into()).to_vec())
    }

    /// {|beta_x>}: 2N rays, slit-major order.
    pub fn diffracted(n: usize) -> Basis {
        let mut labels = Vec::with_capacity(2 * n);
        for slit in Slit::BOTH {
            for element in 0..n {
                labels.push(Component::Ray { slit, element }.into());
            }
        }
        Basis::new(labels)
    }

    /// {|x>}: N positions.
    pub fn position(n: usize) -> Basis {
        Basis::new(
            (0..n)
                .map(|element| Component::Position { element }.into())
                .collect(),
        )
    }

    /// {|0>}: the idle click register alone.
    pub fn click_idle() -> Basis {
        Basis::new(vec![Component::Click(ClickTag::Idle).into()])
    }

    /// Internal qubit of element `j`: {|A(x_j)>, |B(x_j)>}.
    pub fn internal_pair(element: usize) -> Basis {
        Basis::new(
            [Mode::A, Mode::B]
                .map(|mode| Component::Internal { mode, element }.into())
                .to_vec(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_sort_structurally() {
        let b = Basis::diffracted(3);
        // slit-major, element-minor
        assert_eq!(
            b.label(0),
            &BasisLabel::single(Component::Ray {
                slit: Slit::A,
                element: 0
            })
        );
        assert_eq!(
            b.label(3),
            &BasisLabel::single(Component::Ray {
                slit: Slit::B,
                element: 0
            })
        );
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn index_of_finds_every_label() {
        let b = Basis::path().tensor(&Basis::click_idle()).unwrap();
        for (i, l) in b.labels().iter().enumerate() {
            assert_eq!(b.index_of(l), Some(i));
        }
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn merge_rejects_shared_subsystem() {
        let a = BasisLabel::single(Component::Path(Slit::A));
        let b = BasisLabel::single(Component::Path(Slit::B));
        assert!(matches!(
            a.merge(&b),
            Err(crate::SimError::SubsystemOverlap(Subsystem::Path))
        ));
    }

    #[test]
    fn merge_sorts_components_canonically() {
        let click = BasisLabel::single(Component::Click(ClickTag::Fired(2)));
        let pos = BasisLabel::single(Component::Position { element: 2 });
        let ab = pos.merge(&click).unwrap();
        let ba = click.merge(&pos).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.components()[0].subsystem(), Subsystem::Position);
    }

    #[test]
    fn display_is_readable() {
        let l = BasisLabel::new(vec![
            Component::Click(ClickTag::Fired(3)),
            Component::Position { element: 3 },
            Component::Internal {
                mode: Mode::A,
                element: 3,
            },
        ]);
        assert_eq!(
            l.to_string(),
            "(Position:x3, Click:fired(x3), Internal:(A,x3))"
        );
    }

    #[test]
    #[should_panic(expected = "duplicate basis label")]
    fn duplicate_labels_rejected() {
        let l: BasisLabel = Component::Path(Slit::A).into();
        let _ = Basis::new(vec![l.clone(), l]);
    }
}
