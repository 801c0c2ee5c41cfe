r'''

[![License: MIT](https://img.shields.io/badge/License-MIT-yellow.svg)](https://opensource.org/licenses/MIT)

Python package `emsr_codes` implements \( \epsilon \)-MSR erasure codes:
MDS array codes whose single block repair downloads at most
\( (1 + \epsilon) \) times the minimum storage regenerating optimum from
every helper, while keeping the sub-packetization small.

What is an \( \epsilon \)-MSR code?
----------------------------------

An \( (\mathcal{N}, \mathcal{K}) \) MDS array code stores
\( \mathcal{L} \) field symbols per block and survives the loss of any
\( \mathcal{N} - \mathcal{K} \) blocks. When a single block fails, a
minimum storage regenerating (MSR) code rebuilds it by downloading
\( \mathcal{L} / s \) symbols from each of its helpers, but only at a
sub-packetization that grows exponentially in \( \mathcal{N} \).

The codes built here trade a factor \( (1 + \epsilon) \) in per-helper
bandwidth for a sub-packetization \( \mathcal{L} = N \ell \) that grows
only logarithmically. They do so by composing

* an inner \( (n, k, t) \) MSR code with \( t \)-optimal repair and
  \( \ell = s^n \), and
* an outer linear code of length \( N \) over an alphabet of size
  \( q \le n \) whose relative distance is large.

Each outer codeword names one block, and at every outer coordinate the
block behaves like the inner node selected by its outer symbol.

The \( (\mathcal{T}, \mathcal{T}') \)-repair property
-----------------------------------------------------

A repair contacts \( \mathcal{T} = M - n + t \) helpers. Helpers whose
outer codeword agrees with the failed one on some coordinate are
compulsory; there are \( M - 1 - W \) of them, where \( W \) is the number
of full-weight outer codewords. The remaining helpers are free to choose.

Package layout
--------------

### `emsr_codes.gf`
Prime field arithmetic and exact linear algebra on `numpy` arrays.

### `emsr_codes.models.inner_msr`
The inner MSR code: encoding, erasure decoding and \( t \)-optimal repair.

### `emsr_codes.models.outer`
Reed-Solomon outer codes, full-weight counting, the inclusion-exclusion
bound and the algebraic geometry parameter planner.

### `emsr_codes.models.emsr`
The composed code, scalar selection, MDS verification and the metered
repair engine.

### `emsr_codes.cluster_sim`
A simulated storage cluster that repeatedly fails and repairs nodes.

### `emsr_codes.experiments`
Parameter sweeps over codes and outer code bounds.

### `emsr_codes.cli`
Command line interface over on-disk shard files.

Example Usage
-------------

>>> from emsr_codes import build_emsr, plan_repair, execute_repair
>>> code = build_emsr(n=5, k=2, t=3, q=5, N=4, K=2, epsilon=0.5)
>>> word = code.encode(message)
>>> block, report = execute_repair(code, word, plan_repair(code, failed=3))
>>> report.max_helper
80

## Installation

```console
foo@bar:~$ pip install -r requirements.txt
foo@bar:~$ python -m emsr_codes --help
```

Compatibility
-------------
`emsr_codes` requires `python` 3.8+ and `numpy` 1.20+.

License
-------
MIT License

Copyright (c) 2026 The emsr_codes authors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.

'''

__version__ = "0.1.0"


from .gf import Field
from .models.inner_msr import InnerMsrCode, build_inner
from .models.outer import OuterCode, build_rs_outer, fw_lower_bound, ag_plan
from .models.emsr import EmsrCode, build_emsr
from .models.emsr.repair import (compulsory_sets, plan_repair,
                                 interpolation_matrix, execute_repair)
from .metrics import BandwidthReport, bandwidth_check
