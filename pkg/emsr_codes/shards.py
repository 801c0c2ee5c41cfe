"""On-disk shard files and the byte to symbol framing used by the CLI.

A shard file is a fixed little-endian header followed by the payload
symbols, each stored as an unsigned 32 bit integer::

  magic 'EMSR' | version u8 | p n k t q N K u32 | block u32 | length u32

`length` counts payload symbols.

A file is packed into symbols of ``floor(log2 p)`` bits each. The bit
stream is the file, then zero bits, then the file length as 8 little-endian
bytes, sized to fill a whole number of messages.
"""

import os
import struct
from dataclasses import dataclass, astuple

import numpy as np

from .errors import CorruptShard

MAGIC = b'EMSR'
VERSION = 1
HEADER = struct.Struct('<4sB9I')
LENGTH_BYTES = 8


def shard_name(block):
  return 'shard_%03d' % block


def shard_path(workdir, block):
  return os.path.join(workdir, shard_name(block))


@dataclass(frozen=True)
class ShardHeader:

  p: int
  n: int
  k: int
  t: int
  q: int
  N: int
  K: int
  block: int
  length: int

  @classmethod
  def for_code(cls, code, block, length):
    return cls(code.field.p, code.inner.n, code.inner.k, code.inner.t,
               code.outer.q, code.N, code.outer.K, block, length)

  def pack(self):
    return HEADER.pack(MAGIC, VERSION, *astuple(self))

  @classmethod
  def unpack(cls, raw):
    if len(raw) < HEADER.size:
      raise CorruptShard('Shard header is truncated.')
    magic, version, *fields = HEADER.unpack(raw[:HEADER.size])
    if magic != MAGIC:
      raise CorruptShard('Bad shard magic %r.' % (magic,))
    if version != VERSION:
      raise CorruptShard('Unsupported shard version %d.' % version)
    return cls(*fields)

  def matches(self, code):
    expected = ShardHeader.for_code(code, self.block, self.length)
    return astuple(expected) == astuple(self)


def write_shard(path, header, payload):
  payload = np.asarray(payload).astype('<u4').ravel()
  if payload.size != header.length:
    raise CorruptShard('Payload holds %d symbols, header says %d.'
                       % (payload.size, header.length))
  with open(path, 'wb') as f:
    f.write(header.pack())
    f.write(payload.tobytes())


def read_shard(path):
  """Return the header and payload of a shard file."""
  with open(path, 'rb') as f:
    raw = f.read()
  header = ShardHeader.unpack(raw)
  body = raw[HEADER.size:]
  if len(body) != 4 * header.length:
    raise CorruptShard('%s: payload has %d bytes, expected %d.'
                       % (path, len(body), 4 * header.length))
  payload = np.frombuffer(body, dtype='<u4').astype(np.int64)
  if (payload >= header.p).any():
    raise CorruptShard('%s: payload symbol outside GF(%d).'
                       % (path, header.p))
  return header, payload


def symbol_bits(p):
  """Bits carried by one symbol of GF(p)."""
  return int(p).bit_length() - 1


def pack_bytes(data, p, stripe_symbols):
  """Frame `data` as symbols, a whole number of `stripe_symbols` long."""

  w = symbol_bits(p)
  data = np.frombuffer(bytes(data), dtype=np.uint8)
  trailer = np.frombuffer(len(data).to_bytes(LENGTH_BYTES, 'little'),
                          dtype=np.uint8)

  needed = 8 * (len(data) + LENGTH_BYTES)
  symbols = -(-needed // w)
  stripes = max(1, -(-symbols // stripe_symbols))
  total_bits = stripes * stripe_symbols * w

  bits = np.concatenate([np.unpackbits(data),
                         np.zeros(total_bits - needed, dtype=np.uint8),
                         np.unpackbits(trailer)])
  weights = 2 ** np.arange(w - 1, -1, -1, dtype=np.int64)
  return bits.reshape(-1, w).astype(np.int64) @ weights


def unpack_symbols(symbols, p):
  """Inverse of `pack_bytes`."""

  w = symbol_bits(p)
  symbols = np.asarray(symbols, dtype=np.int64)
  if (symbols >> w).any():
    raise CorruptShard('Symbol wider than %d bits.' % w)
  shifts = np.arange(w - 1, -1, -1, dtype=np.int64)
  bits = ((symbols[:, None] >> shifts[None, :]) & 1).astype(np.uint8).ravel()

  if bits.size < 8 * LENGTH_BYTES:
    raise CorruptShard('Symbol stream too short for a length trailer.')
  length = int.from_bytes(np.packbits(bits[-8 * LENGTH_BYTES:]).tobytes(),
                          'little')
  if 8 * (length + LENGTH_BYTES) > bits.size:
    raise CorruptShard('Length trailer %d exceeds the stream.' % length)
  return np.packbits(bits[:8 * length]).tobytes()
