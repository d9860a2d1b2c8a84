"""Photometric profiles and the LM-63 style parser."""
import math

import pytest

from luxplan.photometry import (
    COSINE_LOBE,
    IES_TABLE,
    ISOTROPIC,
    IESParseError,
    PhotometricProfile,
    parse_ies,
)

# Minimal valid file: 2 vertical x 2 horizontal angles, one vertical sweep
# per horizontal angle, multiplier 2.
IES_TEXT = """\
IESNA:LM-63-2002
[TEST] synthetic fixture
TILT=NONE
1 1000 2 2 2 1 2 0.1 0.1 0.1
1.0 0 100
0 90
0 180
500 300
400 200
"""


def test_parse_ies_basic():
    prof = parse_ies(IES_TEXT, source="fixture")
    assert prof.kind == IES_TABLE
    assert prof.vertical_angles == (0.0, 90.0)
    assert prof.horizontal_angles == (0.0, 180.0)
    # table[v][h], multiplier applied
    assert prof.candela == ((1000.0, 800.0), (600.0, 400.0))
    assert prof.peak == 1000.0
    assert prof.source == "fixture"


def test_lookup_exact_at_nodes_and_midpoint():
    prof = parse_ies(IES_TEXT)
    assert prof.lookup(0, 0) == 1000.0
    assert prof.lookup(90, 180) == 400.0
    # bilinear centre: mean of the four corners
    assert prof.lookup(45, 90) == pytest.approx((1000 + 800 + 600 + 400) / 4)


def test_lookup_clamps_outside_grid():
    prof = parse_ies(IES_TEXT)
    assert prof.lookup(120, 0) == prof.lookup(90, 0)
    assert prof.lookup(0, 350) == prof.lookup(0, 180)


def test_relative_intensity_normalizes_by_peak():
    prof = parse_ies(IES_TEXT)
    assert prof.relative_intensity(0, 0) == 1.0
    assert prof.relative_intensity(90, 180) == pytest.approx(0.4)


def test_isotropic_and_cosine_profiles():
    iso = PhotometricProfile(kind=ISOTROPIC)
    cos = PhotometricProfile(kind=COSINE_LOBE)
    assert iso.relative_intensity(0, 0) == 1.0
    assert iso.relative_intensity(173, 211) == 1.0
    assert cos.relative_intensity(0, 0) == pytest.approx(1.0)
    assert cos.relative_intensity(60, 0) == pytest.approx(0.5)
    assert cos.relative_intensity(90, 0) == pytest.approx(0.0)
    assert cos.relative_intensity(135, 0) == 0.0  # nothing above the horizon
    assert iso.peak == 1.0 and cos.peak == 1.0


def test_relative_intensity_accepts_arrays():
    import numpy as np

    cos = PhotometricProfile(kind=COSINE_LOBE)
    out = cos.relative_intensity(np.array([0.0, 60.0, 90.0]), np.zeros(3))
    assert out == pytest.approx([1.0, 0.5, 0.0])


def test_missing_tilt_rejected():
    with pytest.raises(IESParseError, match="TILT"):
        parse_ies("just numbers\n1 2 3\n")


def test_unsupported_tilt_mode_rejected():
    with pytest.raises(IESParseError, match="unsupported TILT"):
        parse_ies(IES_TEXT.replace("TILT=NONE", "TILT=INCLUDE"))


def test_truncated_table_rejected():
    lines = IES_TEXT.strip().splitlines()
    with pytest.raises(IESParseError, match="truncated"):
        parse_ies("\n".join(lines[:-1]))


def test_non_numeric_token_rejected():
    with pytest.raises(IESParseError, match="non-numeric"):
        parse_ies(IES_TEXT + "\nbogus")


def test_angle_range_validation():
    bad = IES_TEXT.replace("0 90", "0 190")  # vertical angles out of range
    with pytest.raises(IESParseError, match="vertical"):
        parse_ies(bad)


def test_table_shape_validation():
    with pytest.raises(IESParseError):
        PhotometricProfile(
            kind=IES_TABLE,
            vertical_angles=(0.0, 90.0),
            horizontal_angles=(0.0,),
            candela=((1.0,),),  # one row for two vertical angles
        )


def test_decreasing_angles_rejected():
    with pytest.raises(IESParseError, match="increasing"):
        PhotometricProfile(
            kind=IES_TABLE,
            vertical_angles=(90.0, 0.0),
            horizontal_angles=(0.0,),
            candela=((1.0,), (2.0,)),
        )


def test_negative_candela_rejected():
    with pytest.raises(IESParseError, match="negative"):
        PhotometricProfile(
            kind=IES_TABLE,
            vertical_angles=(0.0,),
            horizontal_angles=(0.0,),
            candela=((-1.0,),),
        )


def test_unknown_profile_kind_rejected():
    with pytest.raises(ValueError, match="unknown profile"):
        PhotometricProfile(kind="laser")


def test_lookup_requires_table():
    with pytest.raises(ValueError):
        PhotometricProfile(kind=ISOTROPIC).lookup(0, 0)
