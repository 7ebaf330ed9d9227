"""
Sign and orientation conventions.

Every command line report echoes these identifiers so that external oracle
scripts can pin them.
"""

TRANSFER_HOMOTOPY = "Kq1+q1K=f1g1-id"
DUPONT_HOMOTOPY = "sd+ds=EI-id; s=-sum_k (-1)^k sum_|I|=k+1 w_I h_ik...h_i0"
FORM_EXTENSION = "q1(w.x)=-dw.x+(-1)^|w| w.q1(x)"
EDGE_COMPOSITION = "edge02=bch(edge01,edge12)=log(exp(edge01)exp(edge12))"
COCHAIN_BASIS_ORDER = "simplex dimension, vertex tuple, coefficient basis"
DGLA_IMPORT = "q1(l)=-dl; q2(l1,l2)=(-1)^|l1|[l1,l2]"


def as_dict() -> dict[str, str]:
    return {
        "cochain_basis_order": COCHAIN_BASIS_ORDER,
        "dgla_import": DGLA_IMPORT,
        "dupont_homotopy": DUPONT_HOMOTOPY,
        "edge_composition": EDGE_COMPOSITION,
        "form_extension": FORM_EXTENSION,
        "transfer_homotopy": TRANSFER_HOMOTOPY,
    }
