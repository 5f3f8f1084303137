"""
OSTF benchmark reference numbers (per-session statistics and dataset totals).

Rows are (train, test) splits of (authentic images, tampered images,
authentic instances, tampered instances).
"""

from apps.dataset.types import DatasetStats, SplitStats, TamperingMethod

SESSION_NAMES = list(TamperingMethod.values)

SOURCE_DATASETS = {
    TamperingMethod.DST: "ICDAR 2013",
    TamperingMethod.SRNET: "ICDAR 2013",
    TamperingMethod.STEFANN: "ICDAR 2013",
    TamperingMethod.MOSTEL: "ICDAR 2013",
    TamperingMethod.DIFFSTE: "ICDAR 2013",
    TamperingMethod.ANYTEXT: "ICDAR 2013",
    TamperingMethod.UDIFFTEXT_IC13: "ICDAR 2013",
    TamperingMethod.UDIFFTEXT_TEXTOCR: "TextOCR val",
    TamperingMethod.TEXTDIFFUSER: "IC17, ReCTS val",
}

# Editing model behind each session; the two UDiffText sessions share one.
SESSION_METHODS = {
    TamperingMethod.DST: "DST",
    TamperingMethod.SRNET: "SRNet",
    TamperingMethod.STEFANN: "STEFANN",
    TamperingMethod.MOSTEL: "MOSTEL",
    TamperingMethod.DIFFSTE: "DiffSTE",
    TamperingMethod.ANYTEXT: "AnyText",
    TamperingMethod.UDIFFTEXT_IC13: "UDiffText",
    TamperingMethod.UDIFFTEXT_TEXTOCR: "UDiffText",
    TamperingMethod.TEXTDIFFUSER: "TextDiffuser",
}


def _row(
    train_auth,
    test_auth,
    train_tamp,
    test_tamp,
    inst_train_auth,
    inst_test_auth,
    inst_train_tamp,
    inst_test_tamp,
):
    # Column order of the published table: images (auth train/test, tamp train/test),
    # then instances in the same order.
    return DatasetStats(
        train=SplitStats(train_auth, train_tamp, inst_train_auth, inst_train_tamp),
        test=SplitStats(test_auth, test_tamp, inst_test_auth, inst_test_tamp),
    )


REFERENCE_STATS = {
    TamperingMethod.DST: _row(72, 82, 157, 151, 382, 588, 467, 507),
    TamperingMethod.SRNET: _row(29, 55, 200, 178, 342, 607, 507, 488),
    TamperingMethod.STEFANN: _row(182, 181, 47, 52, 721, 946, 128, 149),
    TamperingMethod.MOSTEL: _row(168, 172, 61, 61, 628, 882, 221, 213),
    TamperingMethod.DIFFSTE: _row(174, 181, 55, 52, 683, 943, 166, 152),
    TamperingMethod.ANYTEXT: _row(181, 191, 48, 42, 715, 974, 134, 121),
    TamperingMethod.UDIFFTEXT_IC13: _row(129, 132, 100, 101, 471, 772, 378, 323),
    TamperingMethod.UDIFFTEXT_TEXTOCR: _row(196, 233, 218, 211, 23737, 22886, 419, 399),
    TamperingMethod.TEXTDIFFUSER: _row(40, 40, 123, 123, 2048, 1515, 123, 123),
}

# Dataset-level totals: all images, tampered images, all texts, tampered texts.
REFERENCE_TOTALS = {
    "images": 4418,
    "tampered_images": 1980,
    "instances": 64858,
    "tampered_instances": 5018,
}
