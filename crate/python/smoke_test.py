"""Smoke test for the pyrmpolar extension module.

Build and install it first, e.g. ``maturin develop -m crates/python/Cargo.toml``,
then run ``python python/smoke_test.py``.
"""

import json

import pyrmpolar as rp


def main():
    spec = rp.CodeSpec.rm(1, 3)
    assert (spec.m, spec.n, spec.k, spec.rm_order) == (3, 8, 4, 1)
    assert spec.info_indices == [0, 1, 2, 4]
    assert spec.to_frozen_set() == "m=3 k=4\n0\n1\n2\n4\n"
    assert rp.CodeSpec.from_frozen_set(spec.to_frozen_set()).info_indices == spec.info_indices

    assert rp.rm_dimension(2, 4) == 11
    assert rp.path_weight(5, 3) == 2
    assert rp.index_path(5, 3) == [1, 0, 1]
    assert rp.path_index([1, 0, 1]) == 5
    assert rp.monomial_codeword(0b110, 3) == [0, 0, 0, 0, 0, 0, 1, 1]

    word = [1, 0, 1, 1]
    codeword = rp.encode(spec, word)
    assert len(codeword) == 8 and set(codeword) <= {0, 1}
    _, xors = rp.encode_counted(spec, word)
    assert xors == 12

    # One flipped symbol on a noisy BSC is corrected by every decoder.
    received = rp.modulate(codeword)
    received[5] = -received[5]
    llr = rp.posteriors("bsc:0.1", received)
    sc = rp.sc_decode(spec, llr)
    assert sc["info"] == word and sc["codeword"] == codeword
    assert sc["ops"]["kernel"] == 8 * 3
    candidates, ops = rp.list_decode(spec, llr, 4)
    assert candidates[0][0] == word and len(candidates) == 4
    assert all(a[2] >= b[2] for a, b in zip(candidates, candidates[1:]))
    info, best, loglik = rp.ml_decode(spec, llr)
    assert info == word and best == codeword
    assert abs(loglik - rp.codeword_loglik(codeword, llr)) < 1e-12

    # Random transmission is reproducible from the seed.
    noisy = rp.transmit("awgn:3dB", rp.modulate(codeword), seed=7, rate=spec.rate)
    assert noisy == rp.transmit("awgn:3dB", rp.modulate(codeword), seed=7, rate=spec.rate)

    bec = rp.CodeSpec.bec(6, 32)
    csv = rp.simulate(bec, ["bsc:0.05", "bsc:0.01"], list_size=2, trials=200, seed=1)
    lines = csv.splitlines()
    assert lines[0] == (
        "channel,param,trials,frame_errors,bit_errors,fer,ber,fer_ci95,avg_kernel_ops,avg_select_ops,seed"
    )
    assert [line.split(",")[1] for line in lines[1:]] == ["0.01", "0.05"]
    assert csv == rp.simulate(bec, ["bsc:0.05", "bsc:0.01"], list_size=2, trials=200, seed=1)

    mc = rp.CodeSpec.montecarlo(4, 8, "bec:0.5", trials=2000, seed=3)
    assert mc.k == 8

    report = rp.complexity_probe([5, 6], [1, 2, 4], trials=2)
    assert len(report["decoder"]) == 6 and len(report["encoder"]) == 2
    assert report["max_encoder_residual"] < 1e-12

    for bad in (lambda: rp.CodeSpec.rm(4, 3), lambda: rp.encode(spec, [1, 0]),
                lambda: rp.posteriors("bsc:2", [1.0]), lambda: rp.list_decode(spec, llr, 0)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print(json.dumps({"status": "ok", "fitted_decoder_coefficient": round(report["decoder_coefficient"], 3)}))


if __name__ == "__main__":
    main()
