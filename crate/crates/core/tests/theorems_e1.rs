use fclab_core::exec::Parallelism;
use fclab_core::filtration::Filtration;
use fclab_core::hilbert::LVariant;
use fclab_core::ring::{MonomialIdeal, RingSpec};
use fclab_core::sequence::Window;
use fclab_core::theorems::{run_check, FiberData, Lab, LabConfig, CHECK_IDS};

fn lab(i1: MonomialIdeal, i2: MonomialIdeal) -> Lab {
    Lab::new(LabConfig {
        ring: RingSpec::standard(2, 1).unwrap(),
        filt: Filtration::new(i1, i2).unwrap(),
        k1: 1,
        k2: 1,
        window: Window::new(4, 4),
        fiber_nmax: 6,
        seeds: 3,
        mode: Parallelism::Parallel,
    })
    .unwrap()
}

fn e1() -> Lab {
    lab(
        MonomialIdeal::maximal(2),
        MonomialIdeal::from_exponents(2, &[vec![2, 0], vec![0, 2]]).unwrap(),
    )
}

fn assert_all_ok(l: &Lab) {
    for id in CHECK_IDS {
        let r = run_check(l, id).unwrap();
        assert!(r.verdict.is_ok(), "{id}: {:?} {:?}", r.verdict, r.notes);
        assert!(!r.rows.is_empty(), "{id} checked nothing");
    }
}

#[test]
fn e1_every_check_passes() {
    assert_all_ok(&e1());
}

#[test]
fn maximal_pair_every_check_passes() {
    assert_all_ok(&lab(MonomialIdeal::maximal(2), MonomialIdeal::maximal(2)));
}

#[test]
fn e1_constants() {
    let l = e1();
    assert_eq!(l.mixed().unwrap(), vec![1, 2, 4]);
    let fd = FiberData::load(&l).unwrap();
    assert_eq!(fd.f, vec![1, 0]);
    assert_eq!(fd.c, 1);
    assert_eq!(fd.l, 1);
    assert!(fd.tail_closed);
    assert!(fd.h_ge2.values().all(|&v| v == 0));
    assert_eq!(l.limit(LVariant::Second, 1).unwrap().stable, 3);
    let s = l.fiber().unwrap();
    assert_eq!(s.values, (1..=7).collect::<Vec<i64>>());
}

#[test]
fn unknown_check_is_an_error() {
    assert!(run_check(&e1(), "no-such-check").is_err());
}

#[test]
fn shape_larger_than_dimension_is_rejected() {
    let r = Lab::new(LabConfig {
        ring: RingSpec::standard(2, 1).unwrap(),
        filt: Filtration::new(MonomialIdeal::maximal(2), MonomialIdeal::maximal(2)).unwrap(),
        k1: 2,
        k2: 1,
        window: Window::new(2, 2),
        fiber_nmax: 4,
        seeds: 1,
        mode: Parallelism::Sequential,
    });
    assert!(r.is_err());
}
