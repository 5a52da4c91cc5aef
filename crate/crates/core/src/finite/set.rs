use rand_chacha::ChaCha8Rng;

use super::{check_joint, random_space, DetMap, FiniteCategory};
use crate::error::{Error, Result};
use crate::kernel::{Accuracy, CategoryTag, ItCategory, SampleMorphisms, Side};
use crate::space::Space;

/// Sets and total maps. Accuracy is equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct SetCat;

impl ItCategory for SetCat {
    type Object = Space;
    type Morphism = DetMap;

    fn tag(&self) -> CategoryTag {
        CategoryTag::Set
    }

    fn source(&self, m: &DetMap) -> Space {
        m.source().clone()
    }

    fn target(&self, m: &DetMap) -> Space {
        m.target().clone()
    }

    fn identity(&self, obj: &Space) -> DetMap {
        DetMap::identity(obj)
    }

    fn compose(&self, after: &DetMap, before: &DetMap) -> Result<DetMap> {
        after.after(before)
    }

    fn terminal_object(&self) -> Space {
        Space::terminal()
    }

    fn terminal_morphism(&self, obj: &Space) -> DetMap {
        DetMap::terminal(obj)
    }

    fn product_object(&self, first: &Space, second: &Space) -> Space {
        Space::product(first, second)
    }

    fn projection_first(&self, first: &Space, second: &Space) -> DetMap {
        DetMap::projection_first(first, second)
    }

    fn projection_second(&self, first: &Space, second: &Space) -> DetMap {
        DetMap::projection_second(first, second)
    }

    fn product(&self, a: &DetMap, b: &DetMap) -> Result<DetMap> {
        a.pair(b)
    }

    fn is_deterministic(&self, _m: &DetMap) -> bool {
        true
    }

    fn accuracy(&self, a: &DetMap, b: &DetMap) -> Result<Accuracy> {
        a.source().ensure_same(b.source())?;
        a.target().ensure_same(b.target())?;
        let eq = a == b;
        Ok(Accuracy::from_flags(eq, eq))
    }

    fn approx_eq(&self, a: &DetMap, b: &DetMap) -> bool {
        a == b
    }

    /// A joint in SET is a single point `(x0, y0)`; the constant maps onto
    /// the other coordinate reconstruct it.
    fn conditional(
        &self,
        joint: &DetMap,
        first: &Space,
        second: &Space,
        side: Side,
    ) -> Result<DetMap> {
        check_joint(joint.source(), joint.target(), first, second)?;
        let k = joint.apply(0);
        let (x0, y0) = (k / second.len(), k % second.len());
        Ok(match side {
            Side::WrtFirst => DetMap::constant(first, second, y0),
            Side::WrtSecond => DetMap::constant(second, first, x0),
        })
    }
}

impl FiniteCategory for SetCat {
    fn embed(&self, f: &DetMap) -> DetMap {
        f.clone()
    }

    fn as_deterministic(&self, m: &DetMap) -> Option<DetMap> {
        Some(m.clone())
    }
}

impl SampleMorphisms for SetCat {
    fn random_object(&self, rng: &mut ChaCha8Rng) -> Space {
        random_space(rng)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> DetMap {
        DetMap::random(rng, source, target)
    }

    fn random_deterministic(&self, rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> DetMap {
        DetMap::random(rng, source, target)
    }
}

/// Rejects a label table that does not name elements of `target`.
pub fn det_map_from_labels(source: &Space, target: &Space, labels: &[String]) -> Result<DetMap> {
    if labels.len() != source.len() {
        return Err(Error::LengthMismatch {
            expected: source.len(),
            found: labels.len(),
        });
    }
    let table = labels
        .iter()
        .map(|l| target.index_of(l))
        .collect::<Result<Vec<_>>>()?;
    DetMap::new(source.clone(), target.clone(), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{associator, swap, tensor};

    fn sp(name: &str, labels: &[&str]) -> Space {
        Space::new(name, labels.to_vec()).unwrap()
    }

    #[test]
    fn composition_is_function_composition() {
        let d = sp("D", &["1", "2"]);
        let a = sp("A", &["a"]);
        let u = sp("U", &["u"]);
        let f = DetMap::new(d.clone(), a.clone(), vec![0, 0]).unwrap();
        let g = DetMap::new(a, u.clone(), vec![0]).unwrap();
        assert_eq!(SetCat.compose(&g, &f).unwrap().table(), &[0, 0]);
        assert_eq!(SetCat.compose(&SetCat.identity(&u), &g).unwrap(), g);
    }

    #[test]
    fn tensor_is_pairwise_map() {
        let a = Space::indexed("A", "a", 2).unwrap();
        let b = Space::indexed("B", "b", 3).unwrap();
        let f = DetMap::new(a.clone(), b.clone(), vec![2, 0]).unwrap();
        let g = DetMap::new(b.clone(), a.clone(), vec![1, 1, 0]).unwrap();
        let t = tensor(&SetCat, &f, &g).unwrap();
        for x in 0..2 {
            for y in 0..3 {
                let want = Space::pair_index(f.apply(x), g.apply(y), a.len());
                assert_eq!(t.apply(Space::pair_index(x, y, 3)), want);
            }
        }
    }

    #[test]
    fn swap_and_associator_rebracket() {
        let x = sp("X", &["x1"]);
        let y = sp("Y", &["y1", "y2"]);
        let s = swap(&SetCat, &x, &y);
        assert_eq!(s.target().labels(), &["(y1,x1)", "(y2,x1)"]);
        assert_eq!(s.table(), &[0, 1]);
        let z = sp("W", &["w1", "w2"]);
        let al = associator(&SetCat, &x, &y, &z);
        for (k, &img) in al.table().iter().enumerate() {
            let src = &al.source().labels()[k];
            let dst = &al.target().labels()[img];
            assert_eq!(src.replace(['(', ')'], ""), dst.replace(['(', ')'], ""));
        }
    }

    #[test]
    fn conditional_of_point_joint() {
        let x = Space::indexed("X", "x", 2).unwrap();
        let y = Space::indexed("Y", "y", 3).unwrap();
        let h = DetMap::new(Space::terminal(), Space::product(&x, &y), vec![5]).unwrap();
        let a = SetCat.conditional(&h, &x, &y, Side::WrtFirst).unwrap();
        assert_eq!(a.table(), &[2, 2]);
        let (_, ok) =
            crate::kernel::checked_conditional(&SetCat, &h, &x, &y, Side::WrtSecond).unwrap();
        assert!(ok);
    }

    #[test]
    fn labels_resolve_or_fail() {
        let a = sp("A", &["p", "q"]);
        let b = sp("B", &["u", "v"]);
        let m = det_map_from_labels(&a, &b, &["v".into(), "u".into()]).unwrap();
        assert_eq!(m.table(), &[1, 0]);
        assert!(matches!(
            det_map_from_labels(&a, &b, &["w".into(), "u".into()]),
            Err(Error::UnknownElement { .. })
        ));
    }
}
