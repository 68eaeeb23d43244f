#pragma once

#include <cstddef>
#include <cstdint>

namespace sublog {

/// Optional observer for every charged operation. Used by tests to
/// cross-check the counters against an independent event log.
struct OpTrace {
    virtual ~OpTrace() = default;
    virtual void key_read(std::size_t /*index*/) {}
    virtual void model_read() {}
    virtual void cdf_eval(double /*x*/) {}
};

/// Per-query operation counters. One context per in-flight query;
/// contexts are caller-owned and never shared between queries.
///
/// An array read costs one memory operation. A model evaluation
/// (piecewise lookup or CDF inference) also costs one memory operation;
/// CDF inferences are additionally tallied in cdf_evals. Arithmetic
/// between reads is free.
struct OpContext {
    std::uint64_t mem_ops = 0;
    std::uint64_t cdf_evals = 0;
    OpTrace* trace = nullptr;

    void reset() {
        mem_ops = 0;
        cdf_evals = 0;
    }

    void charge_key_read(std::size_t index) {
        ++mem_ops;
        if (trace) trace->key_read(index);
    }

    void charge_model_read() {
        ++mem_ops;
        if (trace) trace->model_read();
    }

    void charge_cdf(double x) {
        ++mem_ops;
        ++cdf_evals;
        if (trace) trace->cdf_eval(x);
    }
};

}  // namespace sublog
