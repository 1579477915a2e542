#pragma once

// Thin wrapper so the library also builds without OpenMP.

namespace longner {

int max_threads();
void set_threads(int n);

}  // namespace longner
