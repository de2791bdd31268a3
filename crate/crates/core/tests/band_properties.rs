use proptest::prelude::*;
use ringchain::bands::{band_structure, classify_first_band, FirstBandKind};
use ringchain::{xi, Background, Energy};

fn background() -> impl Strategy<Value = Background> {
    (-3.0f64..3.0, 0.05f64..0.45, any::<bool>())
        .prop_map(|(a, f, neg)| Background::new(a, if neg { -f } else { f }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn band_edges_sit_on_unit_dispersion(bg in background()) {
        let bs = band_structure(&bg, (-20.0, 60.0)).unwrap();
        prop_assert!(!bs.bands.is_empty());
        for b in &bs.bands {
            for e in [b.lo, b.hi] {
                if e > -20.0 && e < 60.0 {
                    let x = xi(Energy::new(e).unwrap(), &bg).unwrap();
                    prop_assert!((x.abs() - 1.0).abs() < 1e-9, "E = {e}, xi = {x}");
                }
            }
        }
    }

    #[test]
    fn first_band_class_agrees_with_band_structure(bg in background()) {
        let class = classify_first_band(&bg).unwrap();
        prop_assume!(!class.borderline);
        let bs = band_structure(&bg, (-50.0, 1.0)).unwrap();
        let first = bs.bands.iter().find(|b| b.index == 1).unwrap();
        prop_assert!(bs.gaps[0].lo == f64::NEG_INFINITY);
        match class.kind {
            FirstBandKind::StrictlyNegative => prop_assert!(first.hi < 0.0),
            FirstBandKind::ContainsZero => prop_assert!(first.lo <= 0.0 && first.hi >= 0.0),
            FirstBandKind::InsideUnitInterval => prop_assert!(first.lo > 0.0 && first.hi < 1.0),
        }
    }

    #[test]
    fn enlarging_the_window_keeps_inner_bands(bg in background()) {
        let small = band_structure(&bg, (-5.0, 10.0)).unwrap();
        let large = band_structure(&bg, (-20.0, 40.0)).unwrap();
        for b in small.bands.iter().filter(|b| b.lo > -5.0 && b.hi < 10.0) {
            let twin = large.bands.iter().find(|c| c.index == b.index).unwrap();
            prop_assert!((twin.lo - b.lo).abs() < 1e-12 && (twin.hi - b.hi).abs() < 1e-12);
        }
        prop_assert_eq!(
            small.flat_bands.clone(),
            large.flat_bands.iter().copied().filter(|&e| e <= 10.0).collect::<Vec<_>>()
        );
    }
}
