use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hash::BitMessage;

/// Single-bit message modification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModificationKind {
    FlipBit,
    InsertBit,
    DeleteBit,
}

impl ModificationKind {
    pub const ALL: [ModificationKind; 3] = [
        ModificationKind::FlipBit,
        ModificationKind::InsertBit,
        ModificationKind::DeleteBit,
    ];
}

/// Returns a modified copy of `msg`. `value` is only used by `InsertBit`.
pub fn perturb(
    msg: &BitMessage,
    kind: ModificationKind,
    position: usize,
    value: bool,
) -> Result<BitMessage> {
    let t = msg.len();
    let limit_ok = match kind {
        ModificationKind::InsertBit => position <= t,
        _ => position < t,
    };
    if !limit_ok {
        return Err(invalid(format!(
            "position {position} out of range for {kind:?} on a {t}-bit message"
        )));
    }
    let mut bits = msg.bits().to_vec();
    match kind {
        ModificationKind::FlipBit => bits[position] = !bits[position],
        ModificationKind::InsertBit => bits.insert(position, value),
        ModificationKind::DeleteBit => {
            bits.remove(position);
        }
    }
    Ok(BitMessage::new(bits))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn msg(bits: &[u8]) -> BitMessage {
        BitMessage::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn examples() {
        let m = msg(&[1, 0, 1]);
        assert_eq!(
            perturb(&m, ModificationKind::FlipBit, 1, false).unwrap(),
            msg(&[1, 1, 1])
        );
        assert_eq!(
            perturb(&msg(&[1, 0]), ModificationKind::InsertBit, 2, true).unwrap(),
            msg(&[1, 0, 1])
        );
        assert_eq!(
            perturb(&m, ModificationKind::DeleteBit, 0, false).unwrap(),
            msg(&[0, 1])
        );
        assert_eq!(m, msg(&[1, 0, 1]));
    }

    #[test]
    fn out_of_range() {
        let m = msg(&[1, 0]);
        assert!(perturb(&m, ModificationKind::FlipBit, 2, false).is_err());
        assert!(perturb(&m, ModificationKind::DeleteBit, 2, false).is_err());
        assert!(perturb(&m, ModificationKind::InsertBit, 3, false).is_err());
        assert!(perturb(&BitMessage::default(), ModificationKind::FlipBit, 0, false).is_err());
        assert!(perturb(&BitMessage::default(), ModificationKind::InsertBit, 0, true).is_ok());
    }

    proptest! {
        #[test]
        fn lengths(bits in prop::collection::vec(any::<bool>(), 1..200), pos in any::<prop::sample::Index>(), v: bool) {
            let m = BitMessage::new(bits);
            let t = m.len();
            let flip = perturb(&m, ModificationKind::FlipBit, pos.index(t), v).unwrap();
            prop_assert_eq!(flip.len(), t);
            prop_assert_eq!(flip.bits().iter().zip(m.bits()).filter(|(a, b)| a != b).count(), 1);
            prop_assert_eq!(perturb(&m, ModificationKind::InsertBit, pos.index(t + 1), v).unwrap().len(), t + 1);
            prop_assert_eq!(perturb(&m, ModificationKind::DeleteBit, pos.index(t), v).unwrap().len(), t - 1);
        }
    }
}
