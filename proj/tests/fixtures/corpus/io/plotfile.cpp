// AI_METADATA
// example: Plotfile
// task_type: WRITE_PLOTFILE
// user_intent:
// 1) Write the solution to a plotfile for visualization at a given step
// keywords: WriteSingleLevelPlotfile, Concatenate, varnames
// inputs: MultiFab phi, Geometry geom, Real time, int step
// outputs: plotfile directory on disk

const std::string& pltfile = amrex::Concatenate("plt", step, 5);
amrex::WriteSingleLevelPlotfile(pltfile, phi, {"phi"}, geom, time, step);
