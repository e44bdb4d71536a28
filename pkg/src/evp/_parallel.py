"""Fixed-size work blocks mapped over an optional thread pool."""

from concurrent.futures import ThreadPoolExecutor

# Block size is part of the reproducibility contract: changing it changes
# which stream feeds which resample.
BLOCK_SIZE = 4096


def block_sizes(total, block=BLOCK_SIZE):
    full, rest = divmod(total, block)
    return [block] * full + ([rest] if rest else [])


def map_blocks(fn, total, threads=1, block=BLOCK_SIZE):
    """``[fn(index, size) for each block]`` in block order."""
    sizes = block_sizes(total, block)
    if threads is None or threads <= 1 or len(sizes) <= 1:
        return [fn(i, s) for i, s in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, i, s) for i, s in enumerate(sizes)]
        return [f.result() for f in futures]
