import { AtlasApi } from "./api.js";
import { createAtlas } from "./app.js";

const mount = document.getElementById("app");
if (mount) {
  const atlas = createAtlas(document, new AtlasApi(""), {
    initialFragment: location.hash,
  });
  mount.appendChild(atlas.element);
  window.addEventListener("hashchange", () => {
    void atlas.restore(location.hash);
  });
}
