#pragma once

#include <memory>

#include "gridopt/core/module.hpp"
#include "gridopt/modules/balancing.hpp"
#include "gridopt/modules/core_modules.hpp"
#include "gridopt/modules/energysources.hpp"
#include "gridopt/modules/generators.hpp"
#include "gridopt/modules/policies.hpp"
#include "gridopt/modules/storage.hpp"
#include "gridopt/modules/transmission.hpp"

namespace gridopt::modules {

template <typename M>
ModuleFactory factory() {
  return [] { return std::make_unique<M>(); };
}

// Every module shipped with the library.
inline const ModuleCatalog& builtin_catalog() {
  static const ModuleCatalog catalog = [] {
    ModuleCatalog c;
    c.add(factory<TimescalesModule>());
    c.add(factory<FinancialsModule>());
    c.add(factory<LoadZonesModule>());
    c.add(factory<UnservedLoadModule>());
    c.add(factory<PlanningReservesModule>());
    c.add(factory<ReserveAreasModule>());
    c.add(factory<SpinningReservesModule>());
    c.add(factory<DemandShiftModule>());
    c.add(factory<SourcePropertiesModule>());
    c.add(factory<FuelCostsSimpleModule>());
    c.add(factory<FuelMarketsModule>());
    c.add(factory<GenBuildModule>());
    c.add(factory<DiscreteBuildModule>());
    c.add(factory<GenDispatchModule>());
    c.add(factory<NoCommitModule>());
    c.add(factory<CommitOperateModule>());
    c.add(factory<CommitFuelUseModule>());
    c.add(factory<CommitDiscreteModule>());
    c.add(factory<StorageModule>());
    c.add(factory<HydroSimpleModule>());
    c.add(factory<TxBuildModule>());
    c.add(factory<TxDispatchModule>());
    c.add(factory<RpsModule>());
    c.add(factory<CarbonPoliciesModule>());
    c.add(factory<ReportingModule>());
    return c;
  }();
  return catalog;
}

}  // namespace gridopt::modules
