#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "context.hpp"

namespace pramcc {

/// Runs `copies` independently seeded instances of `task(ctx, index)`, halting
/// any instance whose own ledger passes a budget. Returns the first instance in
/// seed order accepted by `valid`. The caller is charged the largest instance
/// round count and the summed instance work.
template <class Task, class Validator>
auto budgeted_instances(RunContext& ctx, std::size_t copies, std::uint64_t round_budget, std::uint64_t work_budget,
                        Task&& task, Validator&& valid) -> std::invoke_result_t<Task, RunContext&, std::size_t> {
    using Result = std::invoke_result_t<Task, RunContext&, std::size_t>;
    if (copies == 0) throw contract_error("budgeted_instances: copies must be >= 1");

    std::optional<Result> chosen;
    std::vector<InstanceDiagnostic> diagnostics;
    std::vector<CostLedger> ledgers;
    ledgers.reserve(copies);
    for (std::size_t i = 0; i < copies; ++i) {
        RunContext child = ctx.fork(i);
        child.ledger.set_limits(round_budget, work_budget);
        std::string reason;
        try {
            Result r = task(child, i);
            if (valid(r)) {
                if (!chosen) chosen.emplace(std::move(r));
            } else {
                reason = "rejected by validator";
            }
        } catch (const instance_failed& e) {
            reason = e.what();
        }
        if (!reason.empty()) diagnostics.push_back(InstanceDiagnostic{i, child.ledger.rounds(), child.ledger.work(), reason});
        child.ledger.set_limits(std::nullopt, std::nullopt);
        ledgers.push_back(std::move(child.ledger));
    }

    std::size_t longest = 0;
    for (std::size_t i = 1; i < ledgers.size(); ++i)
        if (ledgers[i].rounds() > ledgers[longest].rounds()) longest = i;
    for (std::size_t i = 0; i < ledgers.size(); ++i) ctx.ledger.merge(ledgers[i], i == longest);

    if (!chosen) throw retry_exhausted("all " + std::to_string(copies) + " instances failed", std::move(diagnostics));
    return std::move(*chosen);
}

}  // namespace pramcc
