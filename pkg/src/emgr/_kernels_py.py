"""Reference numpy implementation of the curvature kernels.

Layout conventions (``n`` is the flattened point index)::

    ginv[n, a, b]         inverse metric g^{ab}
    dg[n, k, a, b]        d_k g_{ab}
    h, dh, d2h            metric deviation from the flat background and its
                          first / second partials (d2h[n, k, l, a, b])
    gbar[n, l, m, q]      background connection Gamma-bar^l_{mq}
    dgbar[n, k, l, m, q]  d_k Gamma-bar^l_{mq}

``connection`` returns the connection difference D = Gamma - Gamma-bar and its
partials; ``riemann`` assembles R^r_{s m v} from them.  With ``gbar = 0`` and
``h = g`` these reduce to the textbook formulas.
"""

import numpy as np


def connection(ginv, dg, h, dh, d2h, gbar, dgbar):
    hg = np.einsum("nsp,npmq->nsmq", h, gbar)
    e = (
        np.einsum("nmsq->nsmq", dh)
        + np.einsum("nqsm->nsmq", dh)
        - dh
        - 2.0 * hg
    )
    de = (
        np.einsum("nkmsq->nksmq", d2h)
        + np.einsum("nkqsm->nksmq", d2h)
        - d2h
        - 2.0 * np.einsum("nksp,npmq->nksmq", dh, gbar)
        - 2.0 * np.einsum("nsp,nkpmq->nksmq", h, dgbar)
    )
    dginv = -np.einsum("nla,nkab,nbs->nkls", ginv, dg, ginv)
    d = 0.5 * np.einsum("nls,nsmq->nlmq", ginv, e)
    dd = 0.5 * (
        np.einsum("nkls,nsmq->nklmq", dginv, e) + np.einsum("nls,nksmq->nklmq", ginv, de)
    )
    return d, dd


def riemann(gbar, d, dd):
    a = (
        np.einsum("nmrvs->nrsmv", dd)
        + np.einsum("nrmk,nkvs->nrsmv", gbar, d)
        - np.einsum("nkms,nrvk->nrsmv", gbar, d)
        + np.einsum("nrmk,nkvs->nrsmv", d, d)
    )
    return a - np.swapaxes(a, 3, 4)
